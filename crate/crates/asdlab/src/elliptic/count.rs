use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::curve::Curve;
use crate::error::{Error, Result};
use crate::exactnum::{rational_mod, FqField, Rational, Scalar};

fn residue(x: &Rational, p: u64) -> Result<u64> {
    rational_mod(x, &BigInt::from(p)).and_then(|r| r.to_u64()).ok_or(Error::NonIntegralModel(p))
}

/// Image of the model over F_p: `[a1, a2, a3, a4, a6] mod p`.
pub fn reduce_coeffs(curve: &Curve<Rational>, p: u64) -> Result<[u64; 5]> {
    let mut out = [0u64; 5];
    for (o, c) in out.iter_mut().zip(curve.coeffs()) {
        *o = residue(c, p)?;
    }
    Ok(out)
}

/// `(a_p, #E(F_p))` by summing the quadratic character of
/// `(2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6` over `x ∈ F_p`.
pub fn reduce_and_count(curve: &Curve<Rational>, p: u64) -> Result<(i64, u64)> {
    if p < 3 || !crate::exactnum::fp::is_prime(p) {
        return Err(Error::Config(format!("{p} is not an odd prime")));
    }
    if residue(&curve.discriminant(), p)? == 0 {
        return Err(Error::BadReduction(p));
    }
    let (a_p, count) = count_reduction(curve, p)?;
    assert!((a_p * a_p) as u64 <= 4 * p, "Hasse bound violated: a_{p} = {a_p}");
    Ok((a_p, count))
}

/// `(p + 1 − #E(F_p), #E(F_p))` for the reduction of an integral model,
/// counting the singular point when the reduction is bad.
pub fn count_reduction(curve: &Curve<Rational>, p: u64) -> Result<(i64, u64)> {
    if p < 3 || !crate::exactnum::fp::is_prime(p) {
        return Err(Error::Config(format!("{p} is not an odd prime")));
    }
    let [a1, a2, a3, a4, a6] = reduce_coeffs(curve, p)?;
    let m = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let b2 = (m(a1, a1) + m(4, a2)) % p;
    let b4 = (m(a1, a3) + m(2, a4)) % p;
    let b6 = (m(a3, a3) + m(4, a6)) % p;
    let mut is_square = vec![false; p as usize];
    for x in 0..p {
        is_square[m(x, x) as usize] = true;
    }
    let mut count: u64 = 1;
    for x in 0..p {
        let x2 = m(x, x);
        let v = (m(4, m(x2, x)) + m(b2, x2) + m(2, m(b4, x)) + b6) % p;
        count += if v == 0 {
            1
        } else if is_square[v as usize] {
            2
        } else {
            0
        };
    }
    Ok((p as i64 + 1 - count as i64, count))
}

/// `#E(F_{p^r}) = p^r + 1 − t_r` with `t_0 = 2`, `t_1 = a_p`, `t_j = a_p·t_{j−1} − p·t_{j−2}`.
pub fn count_ext(a_p: i64, p: u64, r: u32) -> i128 {
    let (mut t0, mut t1) = (2i128, a_p as i128);
    for _ in 1..r {
        let t2 = a_p as i128 * t1 - p as i128 * t0;
        t0 = t1;
        t1 = t2;
    }
    let tr = if r == 0 { t0 } else { t1 };
    (p as i128).pow(r) + 1 - tr
}

/// `#E(F_q)` by exhaustive enumeration of `x ∈ F_q`, for an integral model.
pub fn count_over_fq(curve: &Curve<Rational>, field: &Arc<FqField>) -> Result<u64> {
    let p = field.p;
    let c = reduce_coeffs(curve, p)?;
    let z = field.zero();
    let [a1, a2, a3, a4, a6] = c.map(|v| z.from_int_like(v as i64));
    let four = z.from_int_like(4);
    let mut count = 1u64;
    for x in field.elements() {
        let lin = a1.times(&x).plus(&a3);
        let cubic = x.times(&x).times(&x).plus(&a2.times(&x).times(&x)).plus(&a4.times(&x)).plus(&a6);
        let d = lin.times(&lin).plus(&four.times(&cubic));
        count += (1 + d.quadratic_character()) as u64;
    }
    Ok(count)
}
