use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rational_mod, PadicNum, Rational, Zmod64, ZmodBig};
use crate::qseries::QSeries;

/// Coefficients `a(0), …, a(N)`, exactly or modulo a prime power.
#[derive(Clone, Debug, PartialEq)]
pub enum SeqValues {
    Exact(Vec<Rational>),
    /// Residues modulo `p^prec` of p-integral values.
    Residues {
        p: u64,
        prec: u32,
        values: Vec<BigInt>,
    },
}

/// Fourier coefficients of a form, indexed in units of `q^{1/μ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSeq {
    pub source: String,
    pub mu: u32,
    pub values: SeqValues,
}

/// Coefficient rings whose elements are residues of integers.
pub trait Residue {
    fn residue(&self) -> BigInt;
}

impl Residue for Zmod64 {
    fn residue(&self) -> BigInt {
        BigInt::from(self.v)
    }
}

impl Residue for ZmodBig {
    fn residue(&self) -> BigInt {
        self.to_bigint()
    }
}

fn expand<S: crate::exactnum::Scalar>(f: &QSeries<S>) -> Result<Vec<S>> {
    if f.lo() < 0 {
        return Err(Error::Config("sequence has a pole at the cusp".into()));
    }
    f.coeff_range(0, f.trunc())
}

impl CoeffSeq {
    pub fn exact(source: impl Into<String>, mu: u32, values: Vec<Rational>) -> Self {
        CoeffSeq { source: source.into(), mu, values: SeqValues::Exact(values) }
    }

    pub fn residues(source: impl Into<String>, mu: u32, p: u64, prec: u32, values: Vec<BigInt>) -> Self {
        let m = BigInt::from(p).pow(prec);
        let values = values.into_iter().map(|v| v.mod_floor(&m)).collect();
        CoeffSeq { source: source.into(), mu, values: SeqValues::Residues { p, prec, values } }
    }

    /// Exact coefficients of a rational series, indices `0..trunc`.
    pub fn from_rational_series(source: impl Into<String>, f: &QSeries<Rational>) -> Result<Self> {
        Ok(CoeffSeq::exact(source, f.mu(), expand(f)?))
    }

    /// Residues of a series computed in `Z/p^prec`.
    pub fn from_residue_series<S>(source: impl Into<String>, f: &QSeries<S>, p: u64, prec: u32) -> Result<Self>
    where
        S: crate::exactnum::Scalar + Residue,
    {
        let values = expand(f)?.iter().map(Residue::residue).collect();
        Ok(CoeffSeq::residues(source, f.mu(), p, prec, values))
    }

    fn len(&self) -> usize {
        match &self.values {
            SeqValues::Exact(v) => v.len(),
            SeqValues::Residues { values, .. } => values.len(),
        }
    }

    /// Largest available index `N`.
    pub fn max_index(&self) -> u64 {
        self.len().saturating_sub(1) as u64
    }

    /// `a(n)` as a p-adic number known to absolute precision at least
    /// `abs` (exact values) or the stored precision (residues).
    pub fn padic(&self, n: u64, p: u64, abs: i64) -> Result<PadicNum> {
        if n > self.max_index() {
            return Err(Error::InsufficientCoefficients { needed: n, available: self.max_index() });
        }
        match &self.values {
            SeqValues::Exact(v) => {
                let x = &v[n as usize];
                if x.is_zero() {
                    return Ok(PadicNum::zero(p, abs));
                }
                let val = crate::exactnum::valuation(x, p).expect("nonzero");
                let rel = (abs - val).max(1) as u32;
                Ok(PadicNum::from_rational(x, p, rel))
            }
            SeqValues::Residues { p: q, prec, values } => {
                if *q != p {
                    return Err(Error::Config(format!("sequence is stored modulo powers of {q}, not {p}")));
                }
                Ok(PadicNum::from_parts(p, 0, values[n as usize].clone(), *prec))
            }
        }
    }

    /// Whether every value is p-integral.
    pub fn is_integral_at(&self, p: u64) -> bool {
        match &self.values {
            SeqValues::Exact(v) => !v.iter().any(|x| x.denom().is_multiple_of(&BigInt::from(p))),
            SeqValues::Residues { .. } => true,
        }
    }

    /// First index whose value is not p-integral.
    pub fn first_nonintegral(&self, p: u64) -> Option<u64> {
        match &self.values {
            SeqValues::Exact(v) => v.iter().position(|x| x.denom().is_multiple_of(&BigInt::from(p))).map(|i| i as u64),
            SeqValues::Residues { .. } => None,
        }
    }

    /// Primes dividing some denominator, by trial division up to `10^4`;
    /// a cofactor left over is reported as is.
    pub fn denominator_support(&self) -> Vec<BigInt> {
        let SeqValues::Exact(v) = &self.values else { return Vec::new() };
        let mut l = BigInt::one();
        for x in v {
            l = l.lcm(x.denom());
        }
        let mut out = Vec::new();
        let mut q = 2u64;
        while q < 10_000 && !l.is_one() {
            let b = BigInt::from(q);
            if l.is_multiple_of(&b) {
                out.push(b.clone());
                while l.is_multiple_of(&b) {
                    l /= &b;
                }
            }
            q += 1;
        }
        if !l.is_one() {
            out.push(l);
        }
        out
    }

    /// The sequence multiplied by a rational; residue sequences need `c`
    /// to be integral at their prime.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        let values = match &self.values {
            SeqValues::Exact(v) => SeqValues::Exact(v.iter().map(|x| x * c).collect()),
            SeqValues::Residues { p, prec, values } => {
                let m = BigInt::from(*p).pow(*prec);
                let r = rational_mod(c, &m).ok_or_else(|| Error::NonIntegralAtP(0, *p))?;
                SeqValues::Residues {
                    p: *p,
                    prec: *prec,
                    values: values.iter().map(|x| (x * &r).mod_floor(&m)).collect(),
                }
            }
        };
        Ok(CoeffSeq { source: self.source.clone(), mu: self.mu, values })
    }
}
