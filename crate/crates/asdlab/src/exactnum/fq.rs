use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::fp::{is_prime, least_nonresidue};
use super::fpoly::{self, FPoly};
use super::rational::rational_mod;
use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// The field `F_p[x]/(g)` for a fixed monic irreducible `g` of degree `r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqField {
    pub p: u64,
    pub r: u32,
    /// Little-endian, monic, length `r + 1`.
    pub modulus: FPoly,
}

impl FqField {
    /// Build `F_{p^r}` with `p^r ≤ 10^6`.
    ///
    /// The modulus is the first irreducible binomial `x^r − c`
    /// (`c = 1, 2, …`) when one exists, so `F_{p²}` is `F_p(√n)` for the least
    /// non-residue `n`; otherwise the lexicographically first irreducible
    /// when coefficients are read from `x^{r−1}` down to the constant term.
    pub fn new(p: u64, r: u32) -> Result<Arc<FqField>> {
        if !is_prime(p) || r == 0 {
            return Err(Error::Config(format!("F_{{{p}^{r}}} is not a field")));
        }
        if (p as f64).powi(r as i32) > 1e6 {
            return Err(Error::Config(format!("F_{{{p}^{r}}} is too large to enumerate")));
        }
        if r == 1 {
            return Ok(Arc::new(FqField { p, r, modulus: vec![0, 1] }));
        }
        if r == 2 && p > 2 {
            let n = least_nonresidue(p);
            return Ok(Arc::new(FqField { p, r, modulus: vec![p - n, 0, 1] }));
        }
        for c in 1..p {
            let mut g = vec![0u64; r as usize + 1];
            g[0] = p - c;
            g[r as usize] = 1;
            if fpoly::is_irreducible(&g, p) {
                return Ok(Arc::new(FqField { p, r, modulus: g }));
            }
        }
        let total = p.pow(r);
        for idx in 0..total {
            let mut g = vec![0u64; r as usize + 1];
            g[r as usize] = 1;
            let mut t = idx;
            for i in 0..r as usize {
                g[i] = t % p;
                t /= p;
            }
            if fpoly::is_irreducible(&g, p) {
                return Ok(Arc::new(FqField { p, r, modulus: g }));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.r)
    }

    pub fn elem(self: &Arc<Self>, c: &[u64]) -> FqElem {
        let mut v = vec![0u64; self.r as usize];
        for (i, x) in fpoly::rem(c, &self.modulus, self.p).into_iter().enumerate() {
            v[i] = x;
        }
        FqElem { field: self.clone(), c: v }
    }

    pub fn zero(self: &Arc<Self>) -> FqElem {
        FqElem { field: self.clone(), c: vec![0; self.r as usize] }
    }

    /// Every element, in base-`p` counting order of the coefficient vector.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |mut idx| {
            let mut c = vec![0u64; self.r as usize];
            for x in c.iter_mut() {
                *x = idx % self.p;
                idx /= self.p;
            }
            FqElem { field: self.clone(), c }
        })
    }
}

/// Element of a finite field `F_{p^r}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    pub field: Arc<FqField>,
    /// Coefficients of `1, x, …, x^{r−1}`.
    pub c: Vec<u64>,
}

impl FqElem {
    fn poly(&self) -> FPoly {
        fpoly::trim(self.c.clone())
    }

    /// Quadratic character: 1 for nonzero squares, −1 for non-squares, 0 at 0.
    pub fn quadratic_character(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let q = self.field.order();
        if self.pow_u((q - 1) / 2).is_one() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Scalar for FqElem {
    fn ring_key(&self) -> String {
        format!("F{}{:?}", self.field.p, self.field.modulus)
    }
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn from_int_like(&self, n: i64) -> Self {
        let p = self.field.p as i64;
        self.field.elem(&[n.rem_euclid(p) as u64])
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        let v = n.mod_floor(&BigInt::from(self.field.p)).to_u64().expect("reduced");
        self.field.elem(&[v])
    }
    fn from_rational_like(&self, q: &Rational) -> Option<Self> {
        let v = rational_mod(q, &BigInt::from(self.field.p))?.to_u64()?;
        Some(self.field.elem(&[v]))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn plus(&self, o: &Self) -> Self {
        self.field.elem(&fpoly::add(&self.c, &o.c, self.field.p))
    }
    fn minus(&self, o: &Self) -> Self {
        self.field.elem(&fpoly::sub(&self.c, &o.c, self.field.p))
    }
    fn times(&self, o: &Self) -> Self {
        let p = self.field.p;
        self.field.elem(&fpoly::mulmod(&self.poly(), &o.poly(), &self.field.modulus, p))
    }
    fn negated(&self) -> Self {
        self.zero_like().minus(self)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow_u(self.field.order() - 2))
    }
}
