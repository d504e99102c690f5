use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::fp::sqrt_mod;
use super::quad::QuadElem;
use super::rational::{int_valuation, mod_inverse, rational_mod};
use super::Rational;
use crate::error::{Error, Result};

/// A p-adic number `p^val · unit` with `unit` known modulo `p^prec`.
///
/// Nonzero values keep `unit` a p-adic unit, so `prec` is the relative
/// precision and `val + prec` the absolute one. A value indistinguishable
/// from zero has `prec = 0`, `unit = 0` and `val` equal to its absolute
/// precision. Binary operations truncate to the smaller precision.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNum {
    pub p: u64,
    pub prec: u32,
    pub val: i64,
    pub unit: BigInt,
}

fn ppow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

impl PadicNum {
    /// Zero known to absolute precision `abs`.
    pub fn zero(p: u64, abs: i64) -> Self {
        PadicNum { p, prec: 0, val: abs, unit: BigInt::zero() }
    }

    /// `p^val · r` with `r` known modulo `p^prec`, normalized.
    pub fn from_parts(p: u64, val: i64, r: BigInt, prec: u32) -> Self {
        let m = ppow(p, prec);
        let r = r.mod_floor(&m);
        if r.is_zero() {
            return PadicNum::zero(p, val + prec as i64);
        }
        let k = int_valuation(&r, p);
        let prec = prec - k;
        let unit = (r / ppow(p, k)).mod_floor(&ppow(p, prec));
        PadicNum { p, prec, val: val + k as i64, unit }
    }

    /// An exact rational rounded to relative precision `prec`.
    pub fn from_rational(x: &Rational, p: u64, prec: u32) -> Self {
        if x.is_zero() {
            return PadicNum::zero(p, prec as i64);
        }
        let vn = int_valuation(x.numer(), p);
        let vd = int_valuation(x.denom(), p);
        let num = x.numer() / ppow(p, vn);
        let den = x.denom() / ppow(p, vd);
        let m = ppow(p, prec);
        let inv = mod_inverse(&den, &m).expect("denominator is a unit after removing p");
        PadicNum { p, prec, val: vn as i64 - vd as i64, unit: (num * inv).mod_floor(&m) }
    }

    pub fn from_int(n: i64, p: u64, prec: u32) -> Self {
        PadicNum::from_rational(&Rational::from_integer(BigInt::from(n)), p, prec)
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicNum::from_int(1, p, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// `None` when the value is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn abs_precision(&self) -> i64 {
        self.val + self.prec as i64
    }

    /// Value modulo `p^k` for an integral number known to at least `p^k`.
    pub fn residue(&self, k: u32) -> Option<BigInt> {
        if self.abs_precision() < k as i64 {
            return None;
        }
        let m = ppow(self.p, k);
        if self.is_zero() || self.val >= k as i64 {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some((&self.unit * ppow(self.p, self.val as u32)).mod_floor(&m))
    }

    /// The integer (or `p^val · integer`) representative as a rational.
    pub fn to_rational(&self) -> Rational {
        let u = Rational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * Rational::from_integer(ppow(self.p, self.val as u32))
        } else {
            u / Rational::from_integer(ppow(self.p, (-self.val) as u32))
        }
    }

    /// Round to absolute precision `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.val {
            return PadicNum::zero(self.p, abs);
        }
        let prec = (abs - self.val) as u32;
        PadicNum { p: self.p, prec, val: self.val, unit: self.unit.mod_floor(&ppow(self.p, prec)) }
    }

    fn check_prime(&self, o: &Self) {
        assert_eq!(self.p, o.p, "p-adic operands over different primes");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_prime(o);
        let abs = self.abs_precision().min(o.abs_precision());
        if self.is_zero() {
            return o.truncate_abs(abs);
        }
        if o.is_zero() {
            return self.truncate_abs(abs);
        }
        let v = self.val.min(o.val);
        if abs <= v {
            return PadicNum::zero(self.p, abs);
        }
        let prec = (abs - v) as u32;
        let a = &self.unit * ppow(self.p, (self.val - v) as u32);
        let b = &o.unit * ppow(self.p, (o.val - v) as u32);
        PadicNum::from_parts(self.p, v, a + b, prec)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        PadicNum::from_parts(self.p, self.val, -&self.unit, self.prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_prime(o);
        match (self.is_zero(), o.is_zero()) {
            (true, true) => PadicNum::zero(self.p, self.val + o.val),
            (true, false) => PadicNum::zero(self.p, self.val + o.val),
            (false, true) => PadicNum::zero(self.p, o.val + self.val),
            (false, false) => {
                let prec = self.prec.min(o.prec);
                PadicNum::from_parts(self.p, self.val + o.val, &self.unit * &o.unit, prec)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Config("inverse of a p-adic zero".into()));
        }
        let m = ppow(self.p, self.prec);
        let u = mod_inverse(&self.unit, &m).expect("unit");
        Ok(PadicNum { p: self.p, prec: self.prec, val: -self.val, unit: u })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = PadicNum::one(self.p, self.prec.max(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Agreement to absolute precision `k`.
    pub fn eq_mod(&self, o: &Self, k: i64) -> bool {
        let d = self.sub(o);
        d.abs_precision() >= k && (d.is_zero() || d.val >= k)
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let abs = self.abs_precision();
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, abs);
        }
        if self.val == 0 {
            write!(f, "{} + O({}^{})", self.unit, self.p, abs)
        } else {
            write!(f, "{}^{}·{} + O({}^{})", self.p, self.val, self.unit, self.p, abs)
        }
    }
}

/// Square root of `a` in `Q_p` to relative precision `n`; the returned root
/// has leading residue at most `(p−1)/2`.
pub fn hensel_sqrt(a: &Rational, p: u64, n: u32) -> Result<PadicNum> {
    if p == 2 {
        return Err(Error::Config("hensel_sqrt needs an odd prime".into()));
    }
    if a.is_zero() {
        return Ok(PadicNum::zero(p, n as i64));
    }
    let x = PadicNum::from_rational(a, p, n);
    if x.val % 2 != 0 {
        return Err(Error::NonResidue(super::format_rational(a), p));
    }
    let u0 = x.unit.mod_floor(&BigInt::from(p)).to_u64().expect("small");
    let mut r0 = sqrt_mod(u0, p).ok_or_else(|| Error::NonResidue(super::format_rational(a), p))?;
    if r0 > (p - 1) / 2 {
        r0 = p - r0;
    }
    let mut r = BigInt::from(r0);
    let mut prec = 1u32;
    while prec < n {
        prec = (2 * prec).min(n);
        let m = ppow(p, prec);
        let f = (&r * &r - &x.unit).mod_floor(&m);
        let inv = mod_inverse(&(BigInt::from(2) * &r), &m).expect("2r is a unit");
        r = (&r - f * inv).mod_floor(&m);
    }
    Ok(PadicNum::from_parts(p, x.val / 2, r, n))
}

/// The unit root of `T² − a_p·T + p` modulo `p^n`.
pub fn unit_root(a_p: i64, p: u64, n: u32) -> Result<PadicNum> {
    if a_p.rem_euclid(p as i64) == 0 {
        return Err(Error::SupersingularInput(a_p, p));
    }
    let m = ppow(p, n);
    let a = BigInt::from(a_p);
    let pb = BigInt::from(p);
    let mut mu = a.mod_floor(&pb);
    let mut prec = 1u32;
    while prec < n {
        prec = (2 * prec).min(n);
        let mm = ppow(p, prec);
        let f = (&mu * &mu - &a * &mu + &pb).mod_floor(&mm);
        let d = (BigInt::from(2) * &mu - &a).mod_floor(&mm);
        let inv = mod_inverse(&d, &mm).expect("derivative is a unit in the ordinary case");
        mu = (&mu - f * inv).mod_floor(&mm);
    }
    Ok(PadicNum::from_parts(p, 0, mu.mod_floor(&m), n))
}

/// The solution `γ ≡ 1 (mod p)` of `γ^ν = target`, for a unit `target ≡ 1 (mod p)`.
pub fn nth_root_one_mod_p(target: &PadicNum, nu: u64, n: u32) -> Result<PadicNum> {
    let p = target.p;
    if nu % p == 0 {
        return Err(Error::Config(format!("p = {p} divides nu = {nu}")));
    }
    let c = target.residue(n.min(target.abs_precision().max(0) as u32)).ok_or(Error::NoSolution(p))?;
    let n = n.min(target.abs_precision().max(0) as u32);
    if n == 0 || c.mod_floor(&BigInt::from(p)) != BigInt::one() {
        return Err(Error::NoSolution(p));
    }
    let nub = BigInt::from(nu);
    let mut g = BigInt::one();
    let mut prec = 1u32;
    while prec < n {
        prec = (2 * prec).min(n);
        let mm = ppow(p, prec);
        let f = (g.modpow(&nub, &mm) - &c).mod_floor(&mm);
        let d = (&nub * g.modpow(&(&nub - 1u32), &mm)).mod_floor(&mm);
        let inv = mod_inverse(&d, &mm).expect("nu is a unit");
        g = (&g - f * inv).mod_floor(&mm);
    }
    Ok(PadicNum::from_parts(p, 0, g, n))
}

/// `γ_p` for a rational `D` with trivial `σ`: the root `γ ≡ 1 (mod p)` of `γ^ν = D^p/D`.
pub fn gamma_p(d: &Rational, nu: u64, p: u64, n: u32) -> Result<PadicNum> {
    let dp = PadicNum::from_rational(d, p, n);
    if dp.val != 0 {
        return Err(Error::Config(format!("D is not a {p}-adic unit")));
    }
    let target = dp.pow(p as i64)?.div(&dp)?;
    nth_root_one_mod_p(&target, nu, n)
}

/// Image of `x ∈ Q(√d)` in `Z_p` under the embedding given by [`hensel_sqrt`].
pub fn embed_quad(x: &QuadElem, p: u64, n: u32) -> Result<PadicNum> {
    let s = hensel_sqrt(&x.d, p, n)?;
    Ok(PadicNum::from_rational(&x.a, p, n).add(&PadicNum::from_rational(&x.b, p, n).mul(&s)))
}

/// Value of `x` modulo `p^k`, as a residue of a p-integral rational.
pub fn rational_residue(x: &Rational, p: u64, k: u32) -> Option<BigInt> {
    rational_mod(x, &ppow(p, k))
}

/// Morita's `Γ_p(x)` modulo `p^n` for a p-integral rational `x`.
///
/// Uses `Γ_p(N) = (−1)^N·Π_{0<j<N, p∤j} j` at the positive integer
/// `N ≡ x (mod p^n)` and the congruence `Γ_p(x) ≡ Γ_p(y) (mod p^n)` for
/// `x ≡ y (mod p^n)`, so the cost is `O(p^n)` multiplications.
pub fn morita_gamma(x: &Rational, p: u64, n: u32) -> Result<PadicNum> {
    if p == 2 {
        return Err(Error::Config("morita_gamma needs an odd prime".into()));
    }
    let m = ppow(p, n);
    let mut big_n = rational_mod(x, &m)
        .ok_or_else(|| Error::Config(format!("{} is not {p}-integral", super::format_rational(x))))?
        .to_u64()
        .ok_or_else(|| Error::Config("precision too large for morita_gamma".into()))?;
    if big_n == 0 {
        big_n = m.to_u64().expect("checked above");
    }
    let mm = m.to_u64().expect("checked above") as u128;
    let mut acc: u128 = 1;
    for j in 1..big_n {
        if j % p != 0 {
            acc = acc * j as u128 % mm;
        }
    }
    let v = if big_n % 2 == 1 { (mm - acc) % mm } else { acc };
    Ok(PadicNum::from_parts(p, 0, BigInt::from(v), n))
}
