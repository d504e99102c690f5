use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::field::NumberField;
use super::rational::{mod_inverse, rational_mod};
use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// `a + b·√d` with `a, b, d` in a base field `F` and `d` a non-square of `F`.
///
/// Over `F = Rational` this is an element of a quadratic number field; over
/// `F = Quad<Rational>` it is an element of a biquadratic tower.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quad<F> {
    pub a: F,
    pub b: F,
    pub d: F,
}

/// Element of `Q(√d)`.
pub type QuadElem = Quad<Rational>;

impl<F: Scalar> Quad<F> {
    pub fn new(a: F, b: F, d: F) -> Self {
        Quad { a, b, d }
    }

    /// Embed a base-field element.
    pub fn from_base(&self, x: F) -> Self {
        Quad { b: x.zero_like(), a: x, d: self.d.clone() }
    }

    /// The generator `√d`.
    pub fn sqrt_d(&self) -> Self {
        Quad { a: self.a.zero_like(), b: self.a.one_like(), d: self.d.clone() }
    }

    /// The automorphism `√d ↦ −√d`.
    pub fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: self.b.negated(), d: self.d.clone() }
    }

    /// `x·σ(x)`, an element of the base field.
    pub fn norm(&self) -> F {
        self.a.times(&self.a).minus(&self.b.times(&self.b).times(&self.d))
    }

    /// `x + σ(x)`.
    pub fn trace(&self) -> F {
        self.a.plus(&self.a)
    }

    /// The base-field value when the `√d` part vanishes.
    pub fn in_base(&self) -> Option<F> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    /// Apply a base-field map coefficientwise (for example conjugation of a lower layer).
    pub fn map_base(&self, f: impl Fn(&F) -> F) -> Self {
        Quad { a: f(&self.a), b: f(&self.b), d: f(&self.d) }
    }
}

impl QuadElem {
    /// `a + b√d` with rational parts and a squarefree integer `d ∉ {0, 1}`.
    pub fn rational(a: Rational, b: Rational, d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::Config(format!("{d} is not a squarefree radicand")));
        }
        Ok(Quad { a, b, d: Rational::from_integer(BigInt::from(d)) })
    }

    /// Integer radicand.
    pub fn radicand(&self) -> i64 {
        self.d.to_integer().to_i64().expect("radicand fits in i64")
    }
}

pub fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl<F: Scalar> fmt::Debug for Quad<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Scalar> fmt::Display for Quad<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("√({})", self.d);
        let b = if self.b.is_one() {
            root
        } else if self.b.negated().is_one() {
            format!("-{root}")
        } else {
            format!("({})·{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{b}")
        } else {
            write!(f, "{} + {b}", self.a)
        }
    }
}

impl<F: Scalar> Scalar for Quad<F> {
    fn ring_key(&self) -> String {
        format!("{}(sqrt {})", self.a.ring_key(), self.d)
    }
    fn zero_like(&self) -> Self {
        let z = self.a.zero_like();
        Quad { a: z.clone(), b: z, d: self.d.clone() }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Quad { a: self.a.from_int_like(n), b: self.a.zero_like(), d: self.d.clone() }
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Quad { a: self.a.from_bigint_like(n), b: self.a.zero_like(), d: self.d.clone() }
    }
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        Some(Quad { a: self.a.from_rational_like(q)?, b: self.a.zero_like(), d: self.d.clone() })
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Quad { a: self.a.plus(&o.a), b: self.b.plus(&o.b), d: self.d.clone() }
    }
    fn minus(&self, o: &Self) -> Self {
        Quad { a: self.a.minus(&o.a), b: self.b.minus(&o.b), d: self.d.clone() }
    }
    fn times(&self, o: &Self) -> Self {
        let a = self.a.times(&o.a).plus(&self.b.times(&o.b).times(&self.d));
        let b = self.a.times(&o.b).plus(&self.b.times(&o.a));
        Quad { a, b, d: self.d.clone() }
    }
    fn negated(&self) -> Self {
        Quad { a: self.a.negated(), b: self.b.negated(), d: self.d.clone() }
    }
    fn try_inv(&self) -> Option<Self> {
        let n = self.norm().try_inv()?;
        Some(Quad { a: self.a.times(&n), b: self.b.negated().times(&n), d: self.d.clone() })
    }
    /// Solves `a² + d·b² = x.a`, `2ab = x.b` using square roots in the base field.
    fn try_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let half = self.a.from_int_like(2).try_inv()?;
        let disc = self.norm().try_sqrt()?;
        for s in [disc.clone(), disc.negated()] {
            let a2 = self.a.plus(&s).times(&half);
            let Some(a) = a2.try_sqrt() else { continue };
            let cand = if a.is_zero() {
                let Some(b) = self.a.times(&self.d.try_inv()?).try_sqrt() else { continue };
                Quad { a, b, d: self.d.clone() }
            } else {
                let b = self.b.times(&half).times(&a.try_inv()?);
                Quad { a, b, d: self.d.clone() }
            };
            if cand.times(&cand) == *self {
                return Some(cand);
            }
        }
        None
    }
}

impl<F: NumberField> NumberField for Quad<F> {
    fn degree(&self) -> usize {
        2 * self.a.degree()
    }

    fn coords(&self) -> Vec<Rational> {
        let mut c = self.a.coords();
        c.extend(self.b.coords());
        c
    }

    fn from_coords(&self, c: &[Rational]) -> Self {
        let h = c.len() / 2;
        Quad { a: self.a.from_coords(&c[..h]), b: self.a.from_coords(&c[h..]), d: self.d.clone() }
    }

    fn embeddings(&self, p: u64, k: u32) -> Option<Vec<Vec<BigInt>>> {
        let modulus = BigInt::from(p).pow(k);
        let base = self.a.embeddings(p, k)?;
        let dc = self.d.coords();
        let mut out = Vec::new();
        for imgs in base {
            let mut dv = BigInt::zero();
            for (c, img) in dc.iter().zip(&imgs) {
                dv += rational_mod(c, &modulus)? * img;
            }
            let dv = dv.mod_floor(&modulus);
            let s = sqrt_mod_prime_power(&dv, p, k)?;
            for sign in [1i32, -1] {
                let s = if sign == 1 { s.clone() } else { (&modulus - &s).mod_floor(&modulus) };
                let mut v = imgs.clone();
                v.extend(imgs.iter().map(|x| (x * &s).mod_floor(&modulus)));
                out.push(v);
            }
        }
        Some(out)
    }

    fn approx_real(&self) -> Option<f64> {
        let d = self.d.approx_real()?;
        if d <= 0.0 {
            return if self.b.is_zero() { self.a.approx_real() } else { None };
        }
        Some(self.a.approx_real()? + self.b.approx_real()? * d.sqrt())
    }

    fn top_conj(&self) -> Self {
        self.conj()
    }
}

/// Square root of a unit `a` modulo `p^k` (p odd), `None` if `a` is a non-residue or not a unit.
pub fn sqrt_mod_prime_power(a: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    let pb = BigInt::from(p);
    let a0 = a.mod_floor(&pb).to_u64()?;
    if a0 == 0 || p == 2 {
        return None;
    }
    let r0 = super::fp::sqrt_mod(a0, p)?;
    let mut r = BigInt::from(r0);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        let f = (&r * &r - a).mod_floor(&m);
        let inv = mod_inverse(&(BigInt::from(2) * &r), &m)?;
        r = (&r - f * inv).mod_floor(&m);
    }
    let m = pb.pow(k);
    let r = r.mod_floor(&m);
    if r.is_zero() && !a.mod_floor(&m).is_zero() {
        return None;
    }
    Some(if r.is_negative() { r + m } else { r })
}
