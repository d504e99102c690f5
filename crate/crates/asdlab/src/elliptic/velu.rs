use super::curve::{DeRhamVec, ShortCurve};
use super::divpoly::{cubic, division_xparts, multiplication_x_map, torsion_xsum};
use super::point::Point;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// A separable isogeny of short curves, with `φ*(dX/Y) = alpha·dx/y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isogeny<K> {
    pub domain: ShortCurve<K>,
    pub codomain: ShortCurve<K>,
    pub degree: u64,
    /// Monic polynomial whose roots are the x-coordinates of the nonzero kernel points.
    pub kernel_xpoly: Poly<K>,
    pub alpha: K,
    /// `Σ x(P)` over the nonzero kernel points.
    pub kernel_xsum: K,
}

/// 2×2 matrix acting on columns `(c1, c2)`.
pub type Mat2<K> = [[K; 2]; 2];

pub fn mat_mul<K: Scalar>(a: &Mat2<K>, b: &Mat2<K>) -> Mat2<K> {
    let e = |i: usize, j: usize| a[i][0].times(&b[0][j]).plus(&a[i][1].times(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_apply<K: Scalar>(m: &Mat2<K>, v: &DeRhamVec<K>) -> DeRhamVec<K> {
    DeRhamVec::new(m[0][0].times(&v.c1).plus(&m[0][1].times(&v.c2)), m[1][0].times(&v.c1).plus(&m[1][1].times(&v.c2)))
}

pub fn mat_det<K: Scalar>(m: &Mat2<K>) -> K {
    m[0][0].times(&m[1][1]).minus(&m[0][1].times(&m[1][0]))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidKernel(msg.into())
}

/// Vélu's isogeny with kernel the points whose x-coordinates are the roots of `g`.
///
/// The kernel is checked to be squarefree, to divide the division polynomial of
/// the implied group order, and to be closed under doubling.
pub fn velu_from_poly<K: Scalar>(curve: &ShortCurve<K>, g: &Poly<K>) -> Result<Isogeny<K>> {
    let z = curve.zero_elem();
    let g = g.monic().filter(|g| !g.is_zero()).ok_or_else(|| invalid("zero kernel polynomial"))?;
    let dg = g.degree().unwrap_or(0);
    let f = cubic(curve);
    let h = g.gcd(&f);
    let dh = h.degree().unwrap_or(0);
    if dh == 2 {
        return Err(invalid("two of the three 2-torsion points do not form a subgroup"));
    }
    if dg > 0 && g.gcd(&g.derivative()).degree() != Some(0) {
        return Err(invalid("kernel polynomial is not squarefree"));
    }
    let n = 2 * dg - dh;
    let order = n as u32 + 1;
    if dg > 0 {
        let parts = division_xparts(curve, order.max(4) + 1);
        let mut target = parts[order as usize].clone();
        if order % 2 == 0 {
            target = target.times(&f);
        }
        if !target.divrem(&g).map(|(_, r)| r.is_zero()).unwrap_or(false) {
            return Err(invalid(format!("kernel does not divide the {order}-division polynomial")));
        }
        let odd = g.divrem(&h).expect("monic divisor").0;
        if odd.degree().unwrap_or(0) > 0 {
            let (num, den) = multiplication_x_map(curve, &parts, 2);
            let den_inv = den.inv_mod(&odd).ok_or_else(|| invalid("kernel meets 2-torsion inconsistently"))?;
            let x2 = num.times(&den_inv).divrem(&odd).expect("monic").1;
            let mut acc = Poly::zero(&z);
            for c in g.coeffs().iter().rev() {
                acc = acc.times(&x2).plus(&Poly::constant(c.clone())).divrem(&odd).expect("monic").1;
            }
            if !acc.is_zero() {
                return Err(invalid("kernel is not closed under doubling"));
            }
        }
    }
    let pg = g.root_power_sums(3);
    let ph = h.root_power_sums(3);
    let s: Vec<K> = (0..3).map(|i| pg[i].times_int(2).minus(&ph[i])).collect();
    let nk = z.from_int_like(n as i64);
    let t = s[1].times_int(3).plus(&curve.a.times(&nk));
    let w = s[2].times_int(5).plus(&curve.a.times(&s[0]).times_int(3)).plus(&curve.b.times(&nk).times_int(2));
    let codomain = ShortCurve::new(curve.a.minus(&t.times_int(5)), curve.b.minus(&w.times_int(7)))
        .map_err(|_| invalid("codomain is singular"))?;
    Ok(Isogeny {
        domain: curve.clone(),
        codomain,
        degree: order as u64,
        kernel_xpoly: g,
        alpha: z.one_like(),
        kernel_xsum: s[0].clone(),
    })
}

/// Vélu's isogeny with kernel generated by a point of order at most `limit`.
pub fn velu_from_point<K: Scalar>(curve: &ShortCurve<K>, p: &Point<K>, limit: u64) -> Result<Isogeny<K>> {
    if !curve.is_on_curve(p) {
        return Err(invalid("point is not on the curve"));
    }
    let n = curve.order(p, limit).ok_or_else(|| invalid(format!("point order exceeds {limit}")))?;
    let z = curve.zero_elem();
    let mut xs: Vec<K> = Vec::new();
    let mut q = p.clone();
    for _ in 1..n {
        let (x, _) = q.clone().expect("multiples below the order are affine");
        if !xs.contains(&x) {
            xs.push(x);
        }
        q = curve.add(&q, p);
    }
    let g = xs.iter().fold(Poly::constant(z.one_like()), |acc, x| acc.times(&Poly::linear(x)));
    velu_from_poly(curve, &g)
}

impl<K: Scalar> Isogeny<K> {
    /// Multiplication by `m` on `curve`, with `[m]*(dx/y) = m·dx/y`.
    pub fn multiplication(curve: &ShortCurve<K>, m: u32) -> Isogeny<K> {
        let z = curve.zero_elem();
        let parts = division_xparts(curve, m.max(4));
        let mut kernel = parts[m as usize].clone();
        if m % 2 == 0 {
            kernel = kernel.times(&cubic(curve));
        }
        let codomain = ShortCurve::new(curve.a.clone(), curve.b.clone()).expect("domain is nonsingular");
        Isogeny {
            domain: curve.clone(),
            codomain,
            degree: (m as u64) * (m as u64),
            kernel_xpoly: kernel.monic().expect("field"),
            alpha: z.from_int_like(m as i64),
            kernel_xsum: torsion_xsum(curve, m),
        }
    }

    /// `φ*(X·dX/Y) = (deg/α)·x·dx/y − (S/α)·dx/y` up to exact forms, with `S` the kernel x-sum.
    pub fn pullback_second(&self) -> DeRhamVec<K> {
        let ai = self.alpha.try_inv().expect("alpha is nonzero");
        let deg = self.alpha.from_int_like(self.degree as i64);
        DeRhamVec::new(self.kernel_xsum.negated().times(&ai), deg.times(&ai))
    }

    /// Columns are the pullbacks of `dX/Y` and `X·dX/Y`.
    pub fn pullback_matrix(&self) -> Mat2<K> {
        let second = self.pullback_second();
        [[self.alpha.clone(), second.c1], [self.alpha.zero_like(), second.c2]]
    }

    /// Image of a point, using traces over the kernel algebra `K[θ]/(kernel_xpoly)`.
    pub fn map_point(&self, p: &Point<K>) -> Point<K> {
        let (x0, y0) = p.as_ref()?;
        let g = &self.kernel_xpoly;
        if g.eval(x0).is_zero() {
            return None;
        }
        let curve = &self.domain;
        let z = curve.zero_elem();
        let f = cubic(curve);
        let h = g.gcd(&f);
        let tq = Poly::new(&z, vec![curve.a.clone(), z.clone(), z.from_int_like(3)]);
        let uq = f.scale(&z.from_int_like(2));
        // Σ over nonzero kernel points of R(x_Q)/(x0 − x_Q)^k, counting ±Q separately.
        let weighted = |r: &Poly<K>, k: u32| -> K {
            let full = trace_over(g, r, x0, k).times_int(2);
            if h.degree().unwrap_or(0) == 0 {
                full
            } else {
                full.minus(&trace_over(&h, r, x0, k))
            }
        };
        let x1 = x0.plus(&weighted(&tq, 1)).plus(&weighted(&uq, 2));
        let dx = z.one_like().minus(&weighted(&tq, 2)).minus(&weighted(&uq.scale(&z.from_int_like(2)), 3));
        Some((x1, y0.times(&dx)))
    }
}

/// `Tr_{K[θ]/(m)} R(θ)·(x0 − θ)^(−k)` for monic squarefree `m` with `m(x0) ≠ 0`.
fn trace_over<K: Scalar>(m: &Poly<K>, r: &Poly<K>, x0: &K, k: u32) -> K {
    let z = x0.zero_like();
    let lin = Poly::new(&z, vec![x0.clone(), z.from_int_like(-1)]);
    let inv = lin.inv_mod(m).expect("x0 is not a root");
    let mut e = r.divrem(m).expect("monic").1;
    for _ in 0..k {
        e = e.times(&inv).divrem(m).expect("monic").1;
    }
    let tr = m.traces(m.degree().unwrap_or(0));
    e.coeffs().iter().zip(&tr).fold(z.clone(), |acc, (c, t)| acc.plus(&c.times(t)))
}
