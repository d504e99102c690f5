use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::NumberField;

const RM: RoundingMode = RoundingMode::ToEven;

/// Tolerance for accepting a float as an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
struct Complex {
    re: BigFloat,
    im: BigFloat,
}

impl Complex {
    fn add(&self, o: &Self, p: usize) -> Self {
        Complex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }
    fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Complex { re, im }
    }
    fn div(&self, o: &Self, p: usize) -> Self {
        let n = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let conj = Complex { re: o.re.clone(), im: o.im.neg() };
        let m = self.mul(&conj, p);
        Complex { re: m.re.div(&n, p, RM), im: m.im.div(&n, p, RM) }
    }
}

fn from_i64(n: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(n, p)
}

/// Nearest integer to `x` and whether `|x − n| < tol`.
fn nearest_integer(x: &BigFloat, tol: f64) -> Option<(BigInt, bool)> {
    let (words, _, sign, e, _) = x.as_raw_parts()?;
    let bits = words.len() as i64 * 64;
    let mut mag = BigUint::zero();
    for w in words.iter().rev() {
        mag = (mag << 64u32) + BigUint::from(*w);
    }
    let shift = e as i64 - bits;
    let (n, close) = if x.is_zero() {
        (BigUint::zero(), true)
    } else if shift >= 0 {
        (mag << shift as usize, true)
    } else {
        let s = (-shift) as usize;
        let unit = BigUint::one() << s;
        let q = &mag >> s;
        let r = &mag - (&q << s);
        let (n, dist) = if &r << 1usize >= unit { (q + 1u32, &unit - &r) } else { (q, r) };
        // dist / 2^s < tol  ⟺  dist · 10^k < 2^s  for tol = 10^−k
        let k = (-tol.log10()).round() as u32;
        (n, dist * BigUint::from(10u32).pow(k) < unit)
    };
    let n = BigInt::from(n);
    Some((if sign == Sign::Neg { -n } else { n }, close))
}

/// `j(τ)` for `τ = (−b + √(b² − 4ac))/(2a)` in the upper half plane, rounded to an integer.
///
/// Evaluates `E4³/Δ` at `q = e^{2πiτ}` with `bits` of working precision.
pub fn cm_j_from_form(a: i64, b: i64, c: i64, bits: usize) -> Result<BigInt> {
    let disc = b * b - 4 * a * c;
    if a <= 0 || disc >= 0 {
        return Err(Error::Config(format!("({a}, {b}, {c}) is not a positive definite form")));
    }
    let p = bits.max(64);
    let mut cc = Consts::new().map_err(|e| Error::Config(format!("{e:?}")))?;
    let pi = cc.pi(p, RM);
    let two_a = from_i64(2 * a, p);
    let x = from_i64(-b, p).div(&two_a, p, RM);
    let y = from_i64(-disc, p).sqrt(p, RM).div(&two_a, p, RM);
    // q = exp(−2πy)·(cos 2πx + i sin 2πx)
    let two_pi = pi.mul(&from_i64(2, p), p, RM);
    let r = two_pi.mul(&y, p, RM).neg().exp(p, RM, &mut cc);
    let ang = two_pi.mul(&x, p, RM);
    let q = Complex { re: r.mul(&ang.cos(p, RM, &mut cc), p, RM), im: r.mul(&ang.sin(p, RM, &mut cc), p, RM) };
    let one = Complex { re: from_i64(1, p), im: from_i64(0, p) };
    // terms needed: |q|^n < 2^−p with |q| = e^{−2πy}
    let yf = ((-disc) as f64).sqrt() / (2 * a) as f64;
    let terms = ((p as f64 + 64.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * yf)).ceil() as usize + 2;
    let mut e4 = one.clone();
    let mut prod = one.clone();
    let mut qn = one.clone();
    for n in 1..=terms {
        qn = qn.mul(&q, p);
        let sigma3: i64 = (1..=n as i64).filter(|d| n as i64 % d == 0).map(|d| d * d * d).sum();
        let c = from_i64(240 * sigma3, p);
        e4 = e4.add(&Complex { re: qn.re.mul(&c, p, RM), im: qn.im.mul(&c, p, RM) }, p);
        let factor = Complex { re: from_i64(1, p).sub(&qn.re, p, RM), im: qn.im.neg() };
        prod = prod.mul(&factor, p);
    }
    let mut delta = q.clone();
    for _ in 0..24 {
        delta = delta.mul(&prod, p);
    }
    let j = e4.mul(&e4, p).mul(&e4, p).div(&delta, p);
    let (n, close) =
        nearest_integer(&j.re, INTEGER_TOLERANCE).ok_or_else(|| Error::NotNearInteger(format!("{}", j.re)))?;
    let im_small = j.im.is_zero() || nearest_integer(&j.im, INTEGER_TOLERANCE).is_some_and(|(m, ok)| m.is_zero() && ok);
    if !close || !im_small {
        return Err(Error::NotNearInteger(format!("{} + {}i", j.re, j.im)));
    }
    Ok(n)
}

/// `j` of the principal form of discriminant `−d`.
pub fn cm_j_from_disc(d: u64, bits: usize) -> Result<BigInt> {
    let d = d as i64;
    if d <= 0 || !matches!(d % 4, 0 | 3) {
        return Err(Error::Config(format!("−{d} is not a discriminant")));
    }
    let b = d % 2;
    cm_j_from_form(1, b, (b * b + d) / 4, bits)
}

/// Coefficients of `Σ (1 + a·k)·((1/2)_k³/k!³)·λ^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamanujanSeries<F> {
    pub a: F,
    pub lambda: F,
    /// Terms `k = 0..=K` summed in double precision under the real embedding.
    pub partial_sum: f64,
}

/// The series attached to the Legendre eigenvector `(c1, c2)` at `u`:
/// `a = −c2·(1+u)/(c1·u)` and `λ = −4u/(1−u)²`.
pub fn ramanujan_pi<F: NumberField>(u: &F, c1: &F, c2: &F, terms: usize) -> Result<RamanujanSeries<F>> {
    let one = u.one_like();
    let inv = |x: &F| x.try_inv().ok_or_else(|| Error::DivergentParameter(format!("{x} is not invertible")));
    let a = c2.negated().times(&one.plus(u)).times(&inv(&c1.times(u))?);
    let omu = one.minus(u);
    let lambda = u.times_int(-4).times(&inv(&omu.times(&omu))?);
    let real = |x: &F| x.approx_real().ok_or_else(|| Error::DivergentParameter(format!("{x} is not real")));
    let (af, lf) = (real(&a)?, real(&lambda)?);
    if lf.abs() >= 1.0 {
        return Err(Error::DivergentParameter(format!("|λ| = {} ≥ 1", lf.abs())));
    }
    let mut coef = 1.0f64;
    let mut sum = 0.0f64;
    for k in 0..=terms {
        if k > 0 {
            let r = (k as f64 - 0.5) / k as f64;
            coef *= r * r * r * lf;
        }
        sum += (1.0 + af * k as f64) * coef;
    }
    Ok(RamanujanSeries { a, lambda, partial_sum: sum })
}

fn rational_float(x: &crate::exactnum::Rational, p: usize) -> Result<BigFloat> {
    use num_traits::ToPrimitive;
    let (n, d) = (x.numer().to_i64(), x.denom().to_i64());
    match (n, d) {
        (Some(n), Some(d)) => Ok(from_i64(n, p).div(&from_i64(d, p), p, RM)),
        _ => Err(Error::Config(format!("{x} is too large for a float constant"))),
    }
}

/// `|Σ_{k≤K} (1 + a·k)·((1/2)_k³/k!³)·λ^k − c·√r/π|` evaluated with `bits` of
/// working precision, for rational `a`, `λ`, `c`.
pub fn ramanujan_pi_error(
    a: &crate::exactnum::Rational,
    lambda: &crate::exactnum::Rational,
    terms: usize,
    c: &crate::exactnum::Rational,
    r: u64,
    bits: usize,
) -> Result<f64> {
    let p = bits.max(64);
    let (af, lf) = (rational_float(a, p)?, rational_float(lambda, p)?);
    let mut coef = from_i64(1, p);
    let mut sum = from_i64(0, p);
    for k in 0..=terms as i64 {
        if k > 0 {
            let ratio = from_i64(2 * k - 1, p).div(&from_i64(2 * k, p), p, RM);
            coef = coef.mul(&ratio, p, RM).mul(&ratio, p, RM).mul(&ratio, p, RM).mul(&lf, p, RM);
        }
        let weight = from_i64(1, p).add(&af.mul(&from_i64(k, p), p, RM), p, RM);
        sum = sum.add(&weight.mul(&coef, p, RM), p, RM);
    }
    let mut cc = Consts::new().map_err(|e| Error::Config(format!("{e:?}")))?;
    let target = rational_float(c, p)?.mul(&from_i64(r as i64, p).sqrt(p, RM), p, RM).div(&cc.pi(p, RM), p, RM);
    let diff = sum.sub(&target, p, RM).abs();
    if diff.is_zero() {
        return Ok(0.0);
    }
    diff.to_string().parse::<f64>().map_err(|e| Error::Config(format!("float conversion: {e}")))
}
