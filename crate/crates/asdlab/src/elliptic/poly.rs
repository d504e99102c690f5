use std::fmt;

use crate::exactnum::Scalar;

/// Dense univariate polynomial over a field, little-endian, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
    zero: K,
}

impl<K: Scalar> Poly<K> {
    pub fn new(zero: &K, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, zero: zero.zero_like() }
    }

    pub fn zero(zero: &K) -> Self {
        Poly::new(zero, Vec::new())
    }

    pub fn constant(c: K) -> Self {
        let zero = c.zero_like();
        Poly::new(&zero, vec![c])
    }

    /// The monomial `x`.
    pub fn x(zero: &K) -> Self {
        Poly::new(zero, vec![zero.zero_like(), zero.one_like()])
    }

    /// `x − r`.
    pub fn linear(r: &K) -> Self {
        Poly::new(r, vec![r.negated(), r.one_like()])
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn zero_elem(&self) -> &K {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn leading(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn plus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.zero, (0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }

    pub fn minus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.zero, (0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect())
    }

    pub fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(&self.zero, out)
    }

    pub fn scale(&self, c: &K) -> Self {
        Poly::new(&self.zero, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(self.zero.one_like());
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(&self.zero, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.times_int(i as i64)).collect())
    }

    /// Quotient and remainder; `None` if `d` is zero or its leading coefficient is not a unit.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let inv = d.leading().try_inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Poly::zero(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].times(&inv);
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].minus(&c.times(b));
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Some((Poly::new(&self.zero, q), Poly::new(&self.zero, r)))
    }

    pub fn monic(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let inv = self.leading().try_inv()?;
        Some(self.scale(&inv))
    }

    /// Monic greatest common divisor over a field.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor over a field").1;
            a = b;
            b = r;
        }
        a.monic().expect("leading coefficient of a field polynomial is a unit")
    }

    /// Inverse of `self` modulo `m` over a field; `None` when they share a factor.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (m.clone(), self.divrem(m)?.1);
        let (mut t0, mut t1) = (Poly::zero(&self.zero), Poly::constant(self.zero.one_like()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let t = t0.minus(&q.times(&t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.degree()? != 0 {
            return None;
        }
        let c = r0.leading().try_inv()?;
        Some(t0.scale(&c).divrem(m)?.1)
    }

    /// Trace of `θ^k` in `K[θ]/(self)` for `k = 0..=n`, for a monic modulus.
    pub fn traces(&self, n: usize) -> Vec<K> {
        let d = self.degree().unwrap_or(0);
        let mut out = vec![self.zero.from_int_like(d as i64)];
        out.extend(self.root_power_sums(n));
        out
    }

    /// Power sums `Σ r^k`, `k = 1..=n`, of the roots of a monic polynomial (Newton's identities).
    pub fn root_power_sums(&self, n: usize) -> Vec<K> {
        let d = self.degree().unwrap_or(0);
        let e = |i: usize| -> K {
            // coefficient of x^{d-i} in a monic polynomial is (−1)^i e_i
            if i > d {
                return self.zero.clone();
            }
            let c = self.coeff(d - i);
            if i % 2 == 0 {
                c
            } else {
                c.negated()
            }
        };
        let mut p: Vec<K> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut s = e(k).times_int(k as i64);
            if k % 2 == 0 {
                s = s.negated();
            }
            for i in 1..k {
                let term = e(k - i).times(&p[i - 1]);
                if (k - i) % 2 == 1 {
                    s = s.plus(&term);
                } else {
                    s = s.minus(&term);
                }
            }
            p.push(s);
        }
        p
    }

    /// Apply a coefficient map into another field.
    pub fn map<L: Scalar>(&self, zero: &L, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::new(zero, self.coeffs.iter().map(f).collect())
    }
}

impl<K: Scalar> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})·x")?,
                _ => write!(f, "({c})·x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<K: fmt::Debug> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}
