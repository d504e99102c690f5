use num_traits::ToPrimitive;

use super::curve::{DeRhamVec, FamilyModel, Frame};
use super::kernel::kernel_search;
use super::poly::Poly;
use super::velu::{mat_apply, velu_from_poly, Mat2};
use crate::error::{Error, Result};
use crate::exactnum::fp::is_prime;
use crate::exactnum::{format_rational, rat_int, NumberField, Quad, QuadElem, Scalar};

/// Eigenvectors of complex multiplication on first de Rham cohomology,
/// in the family's own differentials.
#[derive(Clone, PartialEq)]
pub struct CmEigenbasis<F> {
    /// The class of the holomorphic differential, `(1, 0)`.
    pub holomorphic: DeRhamVec<F>,
    /// The other eigenvector, normalized to `c1 = 1` when possible.
    pub other: DeRhamVec<F>,
    /// Degree of the endomorphism used.
    pub ell: u32,
    /// Its kernel polynomial on the short model, over `F(√d)`.
    pub kernel: Poly<Quad<F>>,
    /// `μ·M` on the short model, where `M` is the pullback matrix of the
    /// endomorphism and `μ²` the isomorphism scale, so every entry lies in `F(√d)`.
    pub scaled_matrix: Mat2<Quad<F>>,
    /// The two eigenvectors on the short model, over `F(√d)`.
    pub short_eigenvectors: [DeRhamVec<Quad<F>>; 2],
}

impl<F: Scalar> std::fmt::Debug for CmEigenbasis<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CmEigenbasis")
            .field("holomorphic", &self.holomorphic)
            .field("other", &self.other)
            .field("ell", &self.ell)
            .field("kernel", &self.kernel.to_string())
            .finish()
    }
}

/// Odd primes `ℓ ≤ 13` that are norms of `a + b·π`, ascending.
pub fn norm_primes(pi: &QuadElem) -> Vec<u32> {
    let mut out = Vec::new();
    for a in -13i64..=13 {
        for b in 1i64..=13 {
            let x = Quad::new(&pi.a * rat_int(b) + rat_int(a), &pi.b * rat_int(b), pi.d.clone());
            let n = x.norm();
            if !n.is_integer() {
                continue;
            }
            if let Some(v) = n.to_integer().to_u32() {
                if v % 2 == 1 && v <= 13 && is_prime(v as u64) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out
}

/// Eigenbasis for CM by an order containing `π`, trying endomorphisms of
/// degree `ℓ = N(a + bπ)` in ascending order.
pub fn cm_eigenbasis<F: NumberField>(family: &FamilyModel<F>, pi: &QuadElem) -> Result<CmEigenbasis<F>> {
    let ells = norm_primes(pi);
    let mut last = Error::NotAnEndomorphism(0);
    for ell in ells {
        match cm_eigenbasis_with_ell(family, pi, ell) {
            Ok(r) => return Ok(r),
            Err(e @ Error::NotAnEndomorphism(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// [`cm_eigenbasis`] with a fixed endomorphism degree.
pub fn cm_eigenbasis_with_ell<F: NumberField>(
    family: &FamilyModel<F>,
    pi: &QuadElem,
    ell: u32,
) -> Result<CmEigenbasis<F>> {
    let z = family.curve.zero_elem();
    let d = z.from_rational_like(&pi.d).ok_or_else(|| Error::Config("radicand not in the base field".into()))?;
    if d.try_sqrt().is_some() {
        return Err(Error::Config(format!("√{} already lies in the base field", format_rational(&pi.d))));
    }
    let lift = |x: &F| Quad::new(x.clone(), x.zero_like(), d.clone());
    let short = family.curve.to_short()?;
    if short.a.is_zero() || short.b.is_zero() {
        let j = short.j_invariant()?;
        return Err(Error::SingularJ(j.to_string()));
    }
    let short_l = short.map(lift);
    let j = short_l.j_invariant()?;
    let ell_l = short_l.zero_elem().from_int_like(ell as i64);
    for g in kernel_search(&short_l, ell)? {
        let iso = velu_from_poly(&short_l, &g)?;
        if iso.codomain.j_invariant()? != j {
            continue;
        }
        // Codomain (A', B') = (μ⁴A, μ⁶B); the isomorphism back pulls dX/Y to μ·dx/y.
        let (a, b) = (&short_l.a, &short_l.b);
        let (a2, b2) = (&iso.codomain.a, &iso.codomain.b);
        let mu2 = a.times(b2).times(&a2.times(b).try_inv().expect("nonzero"));
        if mu2 == ell_l {
            return Err(Error::RepeatedEigenvalues);
        }
        let s = &iso.kernel_xsum;
        let one = mu2.one_like();
        let zero = mu2.zero_like();
        let scaled_matrix: Mat2<Quad<F>> = [[mu2.clone(), s.negated()], [zero.clone(), ell_l.clone()]];
        let other_short = match s.try_inv() {
            Some(si) if !s.is_zero() => DeRhamVec::new(one.clone(), mu2.minus(&ell_l).times(&si)),
            _ => DeRhamVec::new(zero.clone(), one.clone()),
        };
        let holo_short = DeRhamVec::new(one.clone(), zero.clone());
        debug_assert!(mat_apply(&scaled_matrix, &other_short).parallel(&other_short));
        let family_l = FamilyModel {
            name: family.name.clone(),
            curve: family.curve.map(lift),
            frame: Frame { a: lift(&family.frame.a), b: lift(&family.frame.b), c: lift(&family.frame.c) },
        };
        let transform = &short_l.transform;
        let back = |v: &DeRhamVec<Quad<F>>| -> Result<DeRhamVec<F>> {
            let w = family_l.from_standard(&transform.class_backward(v)).normalized();
            let c1 = w.c1.in_base().ok_or_else(|| Error::NotInRing(w.c1.to_string()))?;
            let c2 = w.c2.in_base().ok_or_else(|| Error::NotInRing(w.c2.to_string()))?;
            Ok(DeRhamVec::new(c1, c2))
        };
        return Ok(CmEigenbasis {
            holomorphic: back(&holo_short)?,
            other: back(&other_short)?,
            ell,
            kernel: g,
            scaled_matrix,
            short_eigenvectors: [holo_short, other_short],
        });
    }
    Err(Error::NotAnEndomorphism(ell as u64))
}
