use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// A commutative ring element that carries its own context.
///
/// Residue rings and quadratic fields need a modulus or a radicand, so every
/// constructor takes `&self` as a template instead of being a static method.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn from_bigint_like(&self, n: &BigInt) -> Self;
    /// `None` when the denominator is not invertible in this ring.
    fn from_rational_like(&self, q: &Rational) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` when the element is not a unit.
    fn try_inv(&self) -> Option<Self>;

    /// Identifies the coefficient ring, for memo keys.
    fn ring_key(&self) -> String {
        std::any::type_name::<Self>().to_string()
    }

    fn one_like(&self) -> Self {
        self.from_int_like(1)
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// A square root when one is known to exist in the ring.
    ///
    /// The default only recognises `0` and `1`.
    fn try_sqrt(&self) -> Option<Self> {
        if self.is_zero() || self.is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn times_int(&self, n: i64) -> Self {
        self.times(&self.from_int_like(n))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// `Σ a[i]·b[n-1-i]` for slices of equal length `n`.
    fn dot_rev(a: &[Self], b: &[Self], zero: &Self) -> Self {
        debug_assert_eq!(a.len(), b.len());
        let n = b.len();
        let mut acc = zero.clone();
        for (i, x) in a.iter().enumerate() {
            if !x.is_zero() {
                acc = acc.plus(&x.times(&b[n - 1 - i]));
            }
        }
        acc
    }

    /// First `len` coefficients of the Cauchy product of `a` and `b`.
    fn convolve(a: &[Self], b: &[Self], len: usize, zero: &Self) -> Vec<Self> {
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let lo = n.saturating_sub(b.len().saturating_sub(1));
            let hi = n.min(a.len().saturating_sub(1));
            if a.is_empty() || b.is_empty() || lo > hi {
                out.push(zero.clone());
                continue;
            }
            out.push(Self::dot_rev(&a[lo..=hi], &b[n - hi..=n - lo], zero));
        }
        out
    }

    /// First `len` coefficients of `1/f`; `None` if `f[0]` is not a unit.
    fn series_inverse(f: &[Self], len: usize) -> Option<Vec<Self>> {
        let inv0 = f.first()?.try_inv()?;
        let zero = inv0.zero_like();
        let mut g: Vec<Self> = Vec::with_capacity(len);
        if len == 0 {
            return Some(g);
        }
        g.push(inv0.clone());
        for n in 1..len {
            let top = n.min(f.len() - 1);
            if top == 0 {
                g.push(zero.clone());
                continue;
            }
            let s = Self::dot_rev(&f[1..=top], &g[n - top..n], &zero);
            g.push(s.times(&inv0).negated());
        }
        Some(g)
    }
}

impl Scalar for Rational {
    fn ring_key(&self) -> String {
        "Q".into()
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn from_int_like(&self, n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    fn convolve(a: &[Self], b: &[Self], len: usize, zero: &Self) -> Vec<Self> {
        if a.is_empty() || b.is_empty() {
            return vec![zero.clone(); len];
        }
        let (na, da) = common_denominator(a);
        let (nb, db) = common_denominator(b);
        let den = &da * &db;
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let lo = n.saturating_sub(nb.len() - 1);
            let hi = n.min(na.len() - 1);
            let mut acc = BigInt::zero();
            if lo <= hi {
                for i in lo..=hi {
                    let x = &na[i];
                    if !x.is_zero() {
                        let y = &nb[n - i];
                        if !y.is_zero() {
                            acc += x * y;
                        }
                    }
                }
            }
            out.push(Rational::new(acc, den.clone()));
        }
        out
    }

    fn series_inverse(f: &[Self], len: usize) -> Option<Vec<Self>> {
        if f.is_empty() || Zero::is_zero(&f[0]) {
            return None;
        }
        // Scale to integers F = D·f, then G_n = g_n·F0^(n+1)/D satisfies an
        // integer recurrence, which avoids a gcd at every step.
        let (fi, d) = common_denominator(f);
        let f0 = fi[0].clone();
        let mut weighted: Vec<BigInt> = Vec::with_capacity(fi.len());
        let mut pw = BigInt::one();
        for (i, c) in fi.iter().enumerate() {
            if i == 0 {
                weighted.push(BigInt::zero());
                continue;
            }
            weighted.push(c * &pw);
            pw *= &f0;
        }
        let mut g: Vec<BigInt> = Vec::with_capacity(len);
        let mut out = Vec::with_capacity(len);
        let mut f0pow = f0.clone();
        for n in 0..len {
            let gn = if n == 0 {
                BigInt::one()
            } else {
                let top = n.min(fi.len() - 1);
                let mut acc = BigInt::zero();
                for i in 1..=top {
                    let w = &weighted[i];
                    if !w.is_zero() {
                        acc += w * &g[n - i];
                    }
                }
                -acc
            };
            out.push(Rational::new(&gn * &d, f0pow.clone()));
            g.push(gn);
            f0pow *= &f0;
        }
        Some(out)
    }
}

/// Integer numerators over the least common denominator.
pub fn common_denominator(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut d = BigInt::one();
    for x in v {
        if !x.denom().is_one() {
            d = d.lcm(x.denom());
        }
    }
    let nums =
        v.iter().map(|x| if x.denom().is_one() { x.numer() * &d } else { x.numer() * (&d / x.denom()) }).collect();
    (nums, d.abs())
}
