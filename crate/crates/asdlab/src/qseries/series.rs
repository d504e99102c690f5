use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, Rational, Scalar};

/// `Σ c_n q^{n/μ}` for `lo ≤ n < trunc`, known exactly below index `trunc`.
///
/// Exponents are integer indices in units of `1/μ`. A nonzero series has a
/// nonzero coefficient at `lo`; the zero series has no stored coefficients
/// and `lo == trunc`. `zero` is a template element that carries the
/// coefficient ring's context (modulus or radicand).
#[derive(Clone, PartialEq)]
pub struct QSeries<S> {
    mu: u32,
    lo: i64,
    coeffs: Vec<S>,
    trunc: i64,
    zero: S,
}

impl<S: Scalar> QSeries<S> {
    /// Build from coefficients at indices `lo, lo+1, …`; missing entries up
    /// to `trunc` are zero and entries at or beyond `trunc` are dropped.
    pub fn from_coeffs(zero: &S, mu: u32, lo: i64, mut coeffs: Vec<S>, trunc: i64) -> Self {
        assert!(mu >= 1, "grading must be positive");
        let len = (trunc - lo).max(0) as usize;
        coeffs.truncate(len);
        coeffs.resize(len, zero.zero_like());
        QSeries { mu, lo, coeffs, trunc, zero: zero.zero_like() }.normalized()
    }

    /// The zero series known below `trunc`.
    pub fn zero(zero: &S, mu: u32, trunc: i64) -> Self {
        QSeries { mu, lo: trunc, coeffs: Vec::new(), trunc, zero: zero.zero_like() }
    }

    pub fn constant(c: S, mu: u32, trunc: i64) -> Self {
        let zero = c.zero_like();
        QSeries::from_coeffs(&zero, mu, 0, vec![c], trunc)
    }

    pub fn one(zero: &S, mu: u32, trunc: i64) -> Self {
        QSeries::constant(zero.one_like(), mu, trunc)
    }

    /// `c·q^{index/μ}`.
    pub fn monomial(c: S, index: i64, mu: u32, trunc: i64) -> Self {
        let zero = c.zero_like();
        QSeries::from_coeffs(&zero, mu, index, vec![c], trunc)
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.lo = self.trunc;
            }
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.lo += k as i64;
            }
            _ => {}
        }
        self
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Exclusive index bound of validity.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn zero_elem(&self) -> &S {
        &self.zero
    }

    /// Stored coefficients from index `lo` to `trunc − 1`.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest index with a nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo)
        }
    }

    fn val_or_trunc(&self) -> i64 {
        self.lo
    }

    /// Coefficient at integer index `n` (exponent `n/μ`).
    pub fn coeff_index(&self, n: i64) -> Result<S> {
        if n >= self.trunc {
            return Err(Error::BeyondTruncation { index: n.to_string(), trunc: self.trunc.to_string() });
        }
        if n < self.lo {
            return Ok(self.zero.clone());
        }
        Ok(self.coeffs[(n - self.lo) as usize].clone())
    }

    /// Coefficient of `q^e` for a rational exponent `e`.
    pub fn coeff(&self, e: &Rational) -> Result<S> {
        let scaled = e * Rational::from_integer(BigInt::from(self.mu));
        if !scaled.is_integer() {
            return Err(Error::NonRepresentableIndex(format_rational(e), self.mu));
        }
        let n: i64 =
            scaled.to_integer().try_into().map_err(|_| Error::NonRepresentableIndex(format_rational(e), self.mu))?;
        self.coeff_index(n)
    }

    /// Coefficients at indices `from..to`, erroring past the truncation.
    pub fn coeff_range(&self, from: i64, to: i64) -> Result<Vec<S>> {
        (from..to).map(|n| self.coeff_index(n)).collect()
    }

    /// Same series with validity lowered to `trunc` (never raised).
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        let keep = (trunc - self.lo).max(0) as usize;
        let coeffs = self.coeffs.iter().take(keep).cloned().collect();
        QSeries::from_coeffs(&self.zero, self.mu, self.lo.min(trunc), coeffs, trunc)
    }

    /// Re-express in the finer grading `q^{1/new_mu}`; index `n` becomes `n·new_mu/μ`.
    pub fn rebase(&self, new_mu: u32) -> Result<Self> {
        if new_mu % self.mu != 0 {
            return Err(Error::IncompatibleGrading(self.mu, new_mu));
        }
        let f = (new_mu / self.mu) as i64;
        Ok(self.spread(f, new_mu))
    }

    fn spread(&self, f: i64, new_mu: u32) -> Self {
        if f == 1 && new_mu == self.mu {
            return self.clone();
        }
        let trunc = self.trunc * f;
        let mut coeffs = vec![self.zero.clone(); ((trunc - self.lo * f).max(0)) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c.clone();
        }
        QSeries::from_coeffs(&self.zero, new_mu, self.lo * f, coeffs, trunc)
    }

    /// Compose with `q ↦ q^m`.
    pub fn substitute_power(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("substitute_power needs m ≥ 1".into()));
        }
        Ok(self.spread(m as i64, self.mu))
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        if self.mu == o.mu {
            return (self.clone(), o.clone());
        }
        let l = self.mu.lcm(&o.mu);
        (self.rebase(l).expect("lcm"), o.rebase(l).expect("lcm"))
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        if self.mu != o.mu {
            let (a, b) = self.common(o);
            return a.add_impl(&b, negate);
        }
        let trunc = self.trunc.min(o.trunc);
        let lo = self.lo.min(o.lo).min(trunc);
        let len = (trunc - lo) as usize;
        let mut coeffs = vec![self.zero.clone(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let n = self.lo + i as i64;
            if n >= trunc {
                break;
            }
            coeffs[(n - lo) as usize] = c.clone();
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            let n = o.lo + i as i64;
            if n >= trunc {
                break;
            }
            let slot = &mut coeffs[(n - lo) as usize];
            *slot = if negate { slot.minus(c) } else { slot.plus(c) };
        }
        QSeries::from_coeffs(&self.zero, self.mu, lo, coeffs, trunc)
    }

    pub fn plus(&self, o: &Self) -> Self {
        self.add_impl(o, false)
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.add_impl(o, true)
    }

    /// Cauchy product, valid below `min(N₁ + v₂, N₂ + v₁)`.
    pub fn times(&self, o: &Self) -> Self {
        if self.mu != o.mu {
            let (a, b) = self.common(o);
            return a.times(&b);
        }
        let trunc = (self.trunc + o.val_or_trunc()).min(o.trunc + self.val_or_trunc());
        if self.is_zero() || o.is_zero() {
            return QSeries::zero(&self.zero, self.mu, trunc);
        }
        let lo = self.lo + o.lo;
        let len = (trunc - lo).max(0) as usize;
        let coeffs = S::convolve(&self.coeffs, &o.coeffs, len, &self.zero);
        QSeries::from_coeffs(&self.zero, self.mu, lo, coeffs, trunc)
    }

    pub fn scale(&self, c: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.times(c)).collect();
        QSeries::from_coeffs(&self.zero, self.mu, self.lo, coeffs, self.trunc)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&self.zero.from_int_like(n))
    }

    /// Multiply by a rational constant, which must be representable in the ring.
    pub fn scale_rational(&self, q: &Rational) -> Result<Self> {
        let c = self
            .zero
            .from_rational_like(q)
            .ok_or_else(|| Error::Config(format!("{} is not in the coefficient ring", format_rational(q))))?;
        Ok(self.scale(&c))
    }

    pub fn negated(&self) -> Self {
        self.scale(&self.zero.from_int_like(-1))
    }

    pub fn add_const(&self, c: &S) -> Self {
        self.plus(&QSeries::constant(c.clone(), self.mu, self.trunc))
    }

    /// Multiplicative inverse; `f = q^v·u` known below `N` gives `1/f` known below `N − 2v`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonUnitLeading);
        }
        let v = self.lo;
        let len = (self.trunc - v) as usize;
        let inv = S::series_inverse(&self.coeffs, len).ok_or(Error::NonUnitLeading)?;
        Ok(QSeries::from_coeffs(&self.zero, self.mu, -v, inv, self.trunc - 2 * v))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.times(&o.invert()?))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        if e == 0 {
            return QSeries::one(&self.zero, self.mu, self.trunc - self.lo.min(0));
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.times(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc.expect("e > 0")
    }

    /// `q d/dq`: the coefficient at index `n` is multiplied by `n/μ`.
    pub fn theta_deriv(&self) -> Self {
        let inv_mu = if self.mu == 1 {
            self.zero.one_like()
        } else {
            self.zero
                .from_rational_like(&Rational::new(BigInt::one(), BigInt::from(self.mu)))
                .expect("grading denominator must be invertible in the coefficient ring")
        };
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| c.times_int(self.lo + i as i64).times(&inv_mu)).collect();
        QSeries::from_coeffs(&self.zero, self.mu, self.lo, coeffs, self.trunc)
    }

    /// Square root with leading coefficient the principal root of the leading term.
    ///
    /// An odd leading index is handled by moving to grading `2μ`.
    pub fn sqrt(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotASquare);
        }
        if self.lo % 2 != 0 {
            return self.rebase(2 * self.mu)?.sqrt();
        }
        let c0 = &self.coeffs[0];
        let g0 = c0.try_sqrt().ok_or(Error::NotASquare)?;
        let inv2g0 = g0.times_int(2).try_inv().ok_or(Error::NotASquare)?;
        let w = self.lo / 2;
        let len = (self.trunc - self.lo) as usize;
        let mut g: Vec<S> = Vec::with_capacity(len);
        g.push(g0);
        for n in 1..len {
            let mut s = self.coeffs[n].clone();
            if n >= 2 {
                s = s.minus(&S::dot_rev(&g[1..n], &g[1..n], &self.zero));
            }
            g.push(s.times(&inv2g0));
        }
        Ok(QSeries::from_coeffs(&self.zero, self.mu, w, g, self.trunc - w))
    }

    /// Map coefficients into another ring.
    pub fn map<T: Scalar>(&self, zero: &T, f: impl Fn(&S) -> Option<T>) -> Result<QSeries<T>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| f(c).ok_or_else(|| Error::Config(format!("coefficient {c} cannot be mapped"))))
            .collect::<Result<Vec<T>>>()?;
        Ok(QSeries::from_coeffs(zero, self.mu, self.lo, coeffs, self.trunc))
    }

    /// Agreement of all coefficients below index `n`; both series must be known there.
    pub fn compare_upto(&self, o: &Self, n: i64) -> Result<bool> {
        let (a, b) = self.common(o);
        let scale = (a.mu / self.mu) as i64;
        let n = n * scale;
        if a.trunc < n || b.trunc < n {
            return Err(Error::BeyondTruncation { index: n.to_string(), trunc: a.trunc.min(b.trunc).to_string() });
        }
        let from = a.lo.min(b.lo).min(n);
        for k in from..n {
            if a.coeff_index(k)? != b.coeff_index(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Keep only the exponents that are integral multiples of `1/new_mu`.
    pub fn regrade(&self, new_mu: u32) -> Result<Self> {
        if self.mu % new_mu != 0 {
            return Err(Error::IncompatibleGrading(self.mu, new_mu));
        }
        let f = (self.mu / new_mu) as i64;
        let lo = Integer::div_ceil(&self.lo, &f);
        let trunc = Integer::div_ceil(&self.trunc, &f);
        let mut coeffs = Vec::new();
        for n in lo..trunc {
            let c = self.coeff_index(n * f)?;
            coeffs.push(c);
        }
        if self.coeffs.iter().enumerate().any(|(i, c)| !c.is_zero() && (self.lo + i as i64) % f != 0) {
            return Err(Error::IncompatibleGrading(self.mu, new_mu));
        }
        Ok(QSeries::from_coeffs(&self.zero, new_mu, lo, coeffs, trunc))
    }
}

impl QSeries<Rational> {
    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn max_abs_numerator_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.numer().magnitude().bits()).max().unwrap_or(0)
    }
}

impl<S: Scalar> fmt::Debug for QSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for QSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.mu == 1 { "q".to_string() } else { format!("q^(1/{})", self.mu) };
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().take(12) {
            if c.is_zero() {
                continue;
            }
            let n = self.lo + i as i64;
            terms.push(match n {
                0 => format!("{c}"),
                1 => format!("({c})·{var}"),
                _ => format!("({c})·{var}^{n}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O({var}^{})", terms.join(" + "), self.trunc)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $impl_fn:ident) => {
        impl<S: Scalar> $tr<&QSeries<S>> for &QSeries<S> {
            type Output = QSeries<S>;
            fn $m(self, o: &QSeries<S>) -> QSeries<S> {
                self.$impl_fn(o)
            }
        }
        impl<S: Scalar> $tr<QSeries<S>> for QSeries<S> {
            type Output = QSeries<S>;
            fn $m(self, o: QSeries<S>) -> QSeries<S> {
                (&self).$impl_fn(&o)
            }
        }
        impl<S: Scalar> $tr<&QSeries<S>> for QSeries<S> {
            type Output = QSeries<S>;
            fn $m(self, o: &QSeries<S>) -> QSeries<S> {
                (&self).$impl_fn(o)
            }
        }
        impl<S: Scalar> $tr<QSeries<S>> for &QSeries<S> {
            type Output = QSeries<S>;
            fn $m(self, o: QSeries<S>) -> QSeries<S> {
                self.$impl_fn(&o)
            }
        }
    };
}

binop!(Add, add, plus);
binop!(Sub, sub, minus);
binop!(Mul, mul, times);

impl<S: Scalar> Neg for &QSeries<S> {
    type Output = QSeries<S>;
    fn neg(self) -> QSeries<S> {
        QSeries::negated(self)
    }
}

impl<S: Scalar> Neg for QSeries<S> {
    type Output = QSeries<S>;
    fn neg(self) -> QSeries<S> {
        QSeries::negated(&self)
    }
}

/// `scale·q^{prefactor}·Π_{n≥1}(1 + sign·q^{step·n})^{exponent(n)}` below index `trunc`.
///
/// When every index below `trunc` is invertible the coefficients come from the
/// logarithmic derivative, `m·a(m) = Σ_j c(j)·a(m−j)` with small integers
/// `c(j)`. Otherwise each factor is applied in place, either as `|e|` passes
/// of multiplication or division by a binomial, or as one sparse
/// multiplication by the truncated binomial series, whichever touches fewer
/// terms.
pub fn prod_expand<S: Scalar>(
    zero: &S,
    prefactor: i64,
    scale: &S,
    sign: i64,
    step: u32,
    exponent: impl Fn(u64) -> i64,
    trunc: i64,
) -> QSeries<S> {
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    assert!(step >= 1);
    let len = (trunc - prefactor).max(0) as usize;
    if len == 0 {
        return QSeries::zero(zero, 1, trunc);
    }
    let inverses: Option<Vec<S>> = (1..len as i64).map(|m| zero.from_int_like(m).try_inv()).collect();
    if let Some(inv) = inverses {
        let a = log_derivative_expand(zero, sign, step, &exponent, len, &inv);
        let coeffs: Vec<S> = a.iter().map(|c| c.times(scale)).collect();
        return QSeries::from_coeffs(zero, 1, prefactor, coeffs, trunc);
    }
    let mut a = vec![zero.zero_like(); len];
    a[0] = zero.one_like();
    let mut n = 1u64;
    while (step as u64 * n) < len as u64 {
        let e = exponent(n);
        let k = (step as u64 * n) as usize;
        n += 1;
        if e == 0 {
            continue;
        }
        let sparse_terms = (len - 1) / k + 1;
        if (e.unsigned_abs() as usize) <= sparse_terms {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    for i in (k..len).rev() {
                        let t = a[i - k].clone();
                        a[i] = if sign == 1 { a[i].plus(&t) } else { a[i].minus(&t) };
                    }
                } else {
                    for i in k..len {
                        let t = a[i - k].clone();
                        a[i] = if sign == 1 { a[i].minus(&t) } else { a[i].plus(&t) };
                    }
                }
            }
        } else {
            let binom = binomial_series(zero, e, sign, sparse_terms);
            let old = a.clone();
            for i in 0..len {
                let mut acc = zero.zero_like();
                let mut j = 0;
                while j * k <= i && j < binom.len() {
                    if !binom[j].is_zero() {
                        acc = acc.plus(&binom[j].times(&old[i - j * k]));
                    }
                    j += 1;
                }
                a[i] = acc;
            }
        }
    }
    let coeffs: Vec<S> = a.iter().map(|c| c.times(scale)).collect();
    QSeries::from_coeffs(zero, 1, prefactor, coeffs, trunc)
}

/// `Π(1 + sign·q^{step·n})^{e(n)}` from `q·f'/f = Σ_j c(j) q^j`, where a
/// factor `(1 + σq^k)^e` contributes `e·k·(−1)^{i+1}σ^i` to `c(ik)`.
fn log_derivative_expand<S: Scalar>(
    zero: &S,
    sign: i64,
    step: u32,
    exponent: &impl Fn(u64) -> i64,
    len: usize,
    inv: &[S],
) -> Vec<S> {
    let mut c = vec![0i64; len];
    let mut n = 1u64;
    while (step as u64 * n) < len as u64 {
        let (e, k) = (exponent(n), (step as u64 * n) as usize);
        n += 1;
        if e == 0 {
            continue;
        }
        let mut term = e * k as i64;
        for j in (k..len).step_by(k) {
            // (−1)^{i+1}σ^i = −(−σ)^i, starting at i = 1 with σ.
            term = if j == k { term * sign } else { -term * sign };
            c[j] += term;
        }
    }
    let mut a = vec![zero.zero_like(); len];
    a[0] = zero.one_like();
    for m in 1..len {
        let mut acc = zero.zero_like();
        for j in 1..=m {
            if c[j] != 0 && !a[m - j].is_zero() {
                acc = acc.plus(&a[m - j].times_int(c[j]));
            }
        }
        a[m] = acc.times(&inv[m - 1]);
    }
    a
}

/// Coefficients of `(1 + sign·x)^e` for `x^0 … x^{count−1}`.
fn binomial_series<S: Scalar>(zero: &S, e: i64, sign: i64, count: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(count);
    let mut c = BigInt::one();
    for j in 0..count as i64 {
        let signed = if sign == -1 && j % 2 == 1 { -c.clone() } else { c.clone() };
        out.push(zero.from_bigint_like(&signed));
        c = c * BigInt::from(e - j) / BigInt::from(j + 1);
    }
    out
}

/// `constant + Σ_{1≤n<trunc} (Σ_{d|n} weight(d, n)) q^n`.
pub fn divisor_series<S: Scalar>(zero: &S, constant: S, weight: impl Fn(u64, u64) -> S, trunc: i64) -> QSeries<S> {
    let len = trunc.max(0) as usize;
    let mut a = vec![zero.zero_like(); len];
    if len > 0 {
        a[0] = constant;
    }
    for d in 1..len {
        let mut n = d;
        while n < len {
            let w = weight(d as u64, n as u64);
            if !w.is_zero() {
                a[n] = a[n].plus(&w);
            }
            n += d;
        }
    }
    QSeries::from_coeffs(zero, 1, 0, a, trunc)
}
