use super::curve::ShortCurve;
use super::poly::Poly;
use crate::exactnum::Scalar;

/// `ψ_m = xpart` for odd `m` and `ψ_m = y·xpart` for even `m`, on `y² = x³ + Ax + B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivPoly<K> {
    pub m: u32,
    pub xpart: Poly<K>,
    pub has_y_factor: bool,
}

impl<K: Scalar> DivPoly<K> {
    /// `(m²−1)/2` for odd `m`, `(m²−4)/2` for even `m`.
    pub fn expected_degree(m: u32) -> usize {
        let m = m as usize;
        if m % 2 == 1 {
            (m * m - 1) / 2
        } else {
            (m * m - 4) / 2
        }
    }
}

/// `x³ + A·x + B` as a polynomial.
pub fn cubic<K: Scalar>(curve: &ShortCurve<K>) -> Poly<K> {
    let z = curve.zero_elem();
    Poly::new(&z, vec![curve.b.clone(), curve.a.clone(), z.clone(), z.one_like()])
}

/// The x-parts `F_0, …, F_n` of the division polynomials, with `F_2 = 2`
/// standing for `ψ_2 = 2y`.
pub fn division_xparts<K: Scalar>(curve: &ShortCurve<K>, n: u32) -> Vec<Poly<K>> {
    let z = curve.zero_elem();
    let (a, b) = (&curve.a, &curve.b);
    let c = |v: K| Poly::constant(v);
    let mut f: Vec<Poly<K>> = Vec::with_capacity(n as usize + 1);
    f.push(Poly::zero(&z));
    f.push(c(z.one_like()));
    f.push(c(z.from_int_like(2)));
    f.push(Poly::new(&z, vec![a.times(a).negated(), b.times_int(12), a.times_int(6), z.clone(), z.from_int_like(3)]));
    f.push(
        Poly::new(
            &z,
            vec![
                a.times(a).times(a).negated().minus(&b.times(b).times_int(8)),
                a.times(b).times_int(-4),
                a.times(a).times_int(-5),
                b.times_int(20),
                a.times_int(5),
                z.clone(),
                z.one_like(),
            ],
        )
        .scale(&z.from_int_like(4)),
    );
    let cub = cubic(curve);
    let cub2 = cub.times(&cub);
    let half = z.from_int_like(2).try_inv().expect("characteristic is not 2");
    for k in 5..=n as usize {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let t1 = f[m + 2].times(&f[m].pow(3));
            let t2 = f[m - 1].times(&f[m + 1].pow(3));
            if m % 2 == 0 {
                cub2.times(&t1).minus(&t2)
            } else {
                t1.minus(&cub2.times(&t2))
            }
        } else {
            let inner = f[m + 2].times(&f[m - 1].pow(2)).minus(&f[m - 2].times(&f[m + 1].pow(2)));
            f[m].times(&inner).scale(&half)
        };
        f.push(next);
    }
    f.truncate(n as usize + 1);
    f
}

/// The `m`-th division polynomial.
pub fn division_poly<K: Scalar>(curve: &ShortCurve<K>, m: u32) -> DivPoly<K> {
    let xpart = division_xparts(curve, m.max(4)).swap_remove(m as usize);
    DivPoly { m, xpart, has_y_factor: m % 2 == 0 }
}

/// `x([k]P)` as `(numerator, denominator)` in `x(P)`:
/// `x − ψ_{k−1}ψ_{k+1}/ψ_k²`, with `y²` replaced by the cubic.
pub fn multiplication_x_map<K: Scalar>(curve: &ShortCurve<K>, parts: &[Poly<K>], k: usize) -> (Poly<K>, Poly<K>) {
    let z = curve.zero_elem();
    let cub = cubic(curve);
    let prod = parts[k - 1].times(&parts[k + 1]);
    let sq = parts[k].times(&parts[k]);
    let (prod, den) = if k % 2 == 1 { (prod.times(&cub), sq) } else { (prod, sq.times(&cub)) };
    (Poly::x(&z).times(&den).minus(&prod), den)
}

/// `Σ x(Q)` over the nonzero `m`-torsion, from the subleading coefficients.
pub fn torsion_xsum<K: Scalar>(curve: &ShortCurve<K>, m: u32) -> K {
    let z = curve.zero_elem();
    if m <= 1 {
        return z;
    }
    let root_sum = |p: &Poly<K>| -> K {
        let d = p.degree().unwrap_or(0);
        if d == 0 {
            return z.clone();
        }
        p.coeff(d - 1).times(&p.leading().try_inv().expect("field")).negated()
    };
    let parts = division_xparts(curve, m.max(4));
    let fm = &parts[m as usize];
    let doubled = root_sum(fm).times_int(2);
    if m % 2 == 0 {
        doubled.plus(&root_sum(&cubic(curve)))
    } else {
        doubled
    }
}
