use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::fp::{inv_mod, mul_mod};
use super::rational::rational_mod;
use super::{Rational, Scalar};

/// Largest modulus handled by [`Zmod64`]; products then fit in 124 bits and
/// sixteen of them can be accumulated in a `u128` before reducing.
pub const ZMOD64_LIMIT: u64 = 1 << 62;

/// Residue modulo a word-sized modulus below [`ZMOD64_LIMIT`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zmod64 {
    pub v: u64,
    pub m: u64,
}

impl Zmod64 {
    pub fn new(v: u64, m: u64) -> Self {
        assert!((2..ZMOD64_LIMIT).contains(&m), "modulus out of range");
        Zmod64 { v: v % m, m }
    }

    pub fn modulus_zero(m: u64) -> Self {
        Zmod64::new(0, m)
    }
}

impl fmt::Debug for Zmod64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.v, self.m)
    }
}

impl fmt::Display for Zmod64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for Zmod64 {
    fn ring_key(&self) -> String {
        format!("Z/{}", self.m)
    }
    fn zero_like(&self) -> Self {
        Zmod64 { v: 0, m: self.m }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Zmod64 { v: (n as i128).rem_euclid(self.m as i128) as u64, m: self.m }
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        let v = n.mod_floor(&BigInt::from(self.m)).to_u64().expect("reduced");
        Zmod64 { v, m: self.m }
    }
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        let r = rational_mod(q, &BigInt::from(self.m))?;
        Some(Zmod64 { v: r.to_u64()?, m: self.m })
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn plus(&self, o: &Self) -> Self {
        let s = self.v + o.v;
        Zmod64 { v: if s >= self.m { s - self.m } else { s }, m: self.m }
    }
    fn minus(&self, o: &Self) -> Self {
        Zmod64 { v: if self.v >= o.v { self.v - o.v } else { self.v + self.m - o.v }, m: self.m }
    }
    fn times(&self, o: &Self) -> Self {
        Zmod64 { v: mul_mod(self.v, o.v, self.m), m: self.m }
    }
    fn negated(&self) -> Self {
        Zmod64 { v: if self.v == 0 { 0 } else { self.m - self.v }, m: self.m }
    }
    fn try_inv(&self) -> Option<Self> {
        Some(Zmod64 { v: inv_mod(self.v, self.m)?, m: self.m })
    }

    fn dot_rev(a: &[Self], b: &[Self], zero: &Self) -> Self {
        let m = zero.m as u128;
        let n = b.len();
        let mut acc: u128 = 0;
        let mut pending = 0;
        for (i, x) in a.iter().enumerate() {
            if x.v == 0 {
                continue;
            }
            acc += x.v as u128 * b[n - 1 - i].v as u128;
            pending += 1;
            if pending == 15 {
                acc %= m;
                pending = 0;
            }
        }
        Zmod64 { v: (acc % m) as u64, m: zero.m }
    }
}

/// Residue modulo an arbitrary modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZmodBig {
    pub v: BigUint,
    pub m: Arc<BigUint>,
}

impl ZmodBig {
    pub fn new(v: BigUint, m: Arc<BigUint>) -> Self {
        ZmodBig { v: v % &*m, m }
    }

    pub fn modulus_zero(m: BigUint) -> Self {
        ZmodBig { v: BigUint::zero(), m: Arc::new(m) }
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.v.clone())
    }
}

impl fmt::Debug for ZmodBig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.v, self.m)
    }
}

impl fmt::Display for ZmodBig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for ZmodBig {
    fn ring_key(&self) -> String {
        format!("Z/{}", self.m)
    }
    fn zero_like(&self) -> Self {
        ZmodBig { v: BigUint::zero(), m: self.m.clone() }
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.from_bigint_like(&BigInt::from(n))
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        let m = BigInt::from_biguint(Sign::Plus, (*self.m).clone());
        let v = n.mod_floor(&m).to_biguint().expect("reduced");
        ZmodBig { v, m: self.m.clone() }
    }
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        let m = BigInt::from_biguint(Sign::Plus, (*self.m).clone());
        let r = rational_mod(q, &m)?;
        Some(ZmodBig { v: r.to_biguint()?, m: self.m.clone() })
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        let mut s = &self.v + &o.v;
        if s >= *self.m {
            s -= &*self.m;
        }
        ZmodBig { v: s, m: self.m.clone() }
    }
    fn minus(&self, o: &Self) -> Self {
        let v = if self.v >= o.v { &self.v - &o.v } else { &self.v + &*self.m - &o.v };
        ZmodBig { v, m: self.m.clone() }
    }
    fn times(&self, o: &Self) -> Self {
        ZmodBig { v: (&self.v * &o.v) % &*self.m, m: self.m.clone() }
    }
    fn negated(&self) -> Self {
        let v = if self.v.is_zero() { BigUint::zero() } else { &*self.m - &self.v };
        ZmodBig { v, m: self.m.clone() }
    }
    fn try_inv(&self) -> Option<Self> {
        let m = BigInt::from_biguint(Sign::Plus, (*self.m).clone());
        let a = BigInt::from_biguint(Sign::Plus, self.v.clone());
        let e = a.extended_gcd(&m);
        if !e.gcd.is_one() {
            return None;
        }
        Some(ZmodBig { v: e.x.mod_floor(&m).to_biguint()?, m: self.m.clone() })
    }

    fn dot_rev(a: &[Self], b: &[Self], zero: &Self) -> Self {
        let n = b.len();
        let mut acc = BigUint::zero();
        for (i, x) in a.iter().enumerate() {
            if !x.v.is_zero() {
                acc += &x.v * &b[n - 1 - i].v;
            }
        }
        ZmodBig { v: acc % &*zero.m, m: zero.m.clone() }
    }
}
