use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lift;
use crate::error::{Error, Result};
use crate::exactnum::{kronecker, Rational, Scalar};
use crate::qseries::{divisor_series, prod_expand, QSeries};

/// Cut a series down to validity `n`, failing if it is known to less.
pub(crate) fn finish<S: Scalar>(f: QSeries<S>, n: i64) -> Result<QSeries<S>> {
    if f.trunc() < n {
        return Err(Error::InsufficientCoefficients { needed: n as u64, available: f.trunc().max(0) as u64 });
    }
    Ok(f.truncate(n))
}

/// `θ = Σ_{k∈Z} q^{k²}`.
pub fn theta<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    let len = n.max(0) as usize;
    let mut c = vec![zero.zero_like(); len];
    let two = zero.from_int_like(2);
    let mut k = 0usize;
    while k * k < len {
        c[k * k] = if k == 0 { zero.one_like() } else { two.clone() };
        k += 1;
    }
    QSeries::from_coeffs(zero, 1, 0, c, n)
}

/// `θ^e`.
pub fn theta_power<S: Scalar>(zero: &S, e: u32, n: i64) -> QSeries<S> {
    theta(zero, n).pow(e)
}

/// `λ = 16q·Π(1+q^{2n})^{16}/Π(1+q^n)^8`.
pub fn lambda<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    prod_expand(zero, 1, &zero.from_int_like(16), 1, 1, |k| if k % 2 == 0 { 8 } else { -8 }, n)
}

/// Bernoulli number `B_k` with `B_1 = −1/2`.
pub fn bernoulli(k: u32) -> Rational {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=k as usize {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b[k as usize].clone()
}

/// Normalised Eisenstein series `E_k = 1 − (2k/B_k)Σ σ_{k−1}(n) q^n` for even `k ≥ 2`.
pub fn eisenstein<S: Scalar>(zero: &S, k: u32, n: i64) -> Result<QSeries<S>> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Config(format!("no Eisenstein series of weight {k}")));
    }
    let factor = -Rational::from_integer(BigInt::from(2 * k)) / bernoulli(k);
    let factor = lift(zero, &factor)?;
    let powers: Vec<S> =
        (0..n.max(1) as u64).map(|d| zero.from_bigint_like(&BigInt::from(d).pow(k - 1)).times(&factor)).collect();
    Ok(divisor_series(zero, zero.one_like(), |d, _| powers[d as usize].clone(), n))
}

/// `Δ = qΠ(1 − q^n)^{24}`.
pub fn delta<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    prod_expand(zero, 1, &zero.one_like(), -1, 1, |_| 24, n)
}

/// `j = E_4³/Δ`, starting at `q^{−1}`.
pub fn j_invariant<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let e4 = eisenstein(zero, 4, n + 2)?;
    let d = delta(zero, n + 2);
    finish(e4.pow(3).times(&d.invert()?), n)
}

/// `A = qΠ(1 + q^m)^{24}`, the Hauptmodul of `Γ_0(2)`.
pub fn hauptmodul_a<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    prod_expand(zero, 1, &zero.one_like(), 1, 1, |_| 24, n)
}

/// `φ_0 = 1 + 24Σ m q^m/(1 + q^m)`.
pub fn phi0<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    let c24 = zero.from_int_like(24);
    divisor_series(
        zero,
        zero.one_like(),
        |d, m| {
            let sign = if (m / d) % 2 == 1 { 1 } else { -1 };
            c24.times_int(sign * d as i64)
        },
        n,
    )
}

/// `3·C_4 = A/(1 + 64A)·(4φ_0² − E_4)`, an integral series.
pub fn c4_times_three<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let a = hauptmodul_a(zero, n);
    let den = a.scale_int(64).add_const(&zero.one_like());
    let phi = phi0(zero, n);
    let e4 = eisenstein(zero, 4, n)?;
    let bracket = phi.pow(2).scale_int(4).minus(&e4);
    finish(a.times(&den.invert()?).times(&bracket), n)
}

/// `C_4 = A/(3(1 + 64A))·(4φ_0² − E_4)`.
pub fn c4<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let third = lift(zero, &crate::exactnum::rat(1, 3))?;
    Ok(c4_times_three(zero, n)?.scale(&third))
}

/// `t = qΠ(1 − q^n)^{5(n/5)}`, the Hauptmodul of `Γ_1(5)`.
pub fn t_gamma1_5<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    prod_expand(zero, 1, &zero.one_like(), -1, 1, |k| 5 * kronecker(k as i64, 5) as i64, n)
}

/// `t_2 = t^{1/2}` in grading `q^{1/2}`, known below index `n`.
pub fn t2<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let t = t_gamma1_5(zero, n / 2 + 3);
    finish(t.sqrt()?, n)
}

/// Apéry numbers `a_n = Σ_k C(n,k)² C(n+k,k)` for `n < count`.
pub fn apery_numbers(count: usize) -> Vec<BigInt> {
    (0..count as u64)
        .map(|m| {
            let mut total = BigInt::zero();
            let mut c_nk = BigInt::one();
            let mut c_mkk = BigInt::one();
            for k in 0..=m {
                total += &c_nk * &c_nk * &c_mkk;
                c_nk = c_nk * BigInt::from(m - k) / BigInt::from(k + 1);
                c_mkk = c_mkk * BigInt::from(m + k + 1) / BigInt::from(k + 1);
            }
            total
        })
        .collect()
}

/// `F = (q dt/dq)·Σ_n a_n t^n`, summed by Horner's rule over `n < N`.
pub fn apery_f_definitional<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    let t = t_gamma1_5(zero, n);
    let a = apery_numbers(n.max(1) as usize);
    let mut acc = QSeries::constant(zero.from_bigint_like(&a[a.len() - 1]), 1, n);
    for c in a.iter().rev().skip(1) {
        acc = acc.times(&t).add_const(&zero.from_bigint_like(c));
    }
    t.theta_deriv().times(&acc).truncate(n)
}

/// The same `F` from its Eisenstein form `Σ_{d|n} w(d mod 5)·d²` with
/// `w = (0, 1, −2, 2, −1)`, which agrees with the Horner sum (checked in tests).
pub fn apery_f<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    const W: [i64; 5] = [0, 1, -2, 2, -1];
    let weights: Vec<S> = (0..n.max(1) as u64)
        .map(|d| zero.from_bigint_like(&(BigInt::from(d) * BigInt::from(d) * BigInt::from(W[(d % 5) as usize]))))
        .collect();
    divisor_series(zero, zero.zero_like(), |d, _| weights[d as usize].clone(), n)
}

/// `h_2 = F·t_2` in grading `q^{1/2}`.
pub fn h2<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let f = apery_f(zero, n / 2 + 3);
    finish(f.times(&t2(zero, n + 2)?), n)
}

/// `F/t_2 = F·t_2/t`, the weight 3 cusp form whose coefficients obey the
/// three-term relation with `B_p`; the printed `F·t_2` does not.
pub fn h2_cusp<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let f = apery_f(zero, n / 2 + 3);
    finish(f.times(&t2(zero, n + 4)?.invert()?), n)
}

/// `η(4τ)^6 = qΠ(1 − q^{4n})^6`.
pub fn eta4_6<S: Scalar>(zero: &S, n: i64) -> QSeries<S> {
    prod_expand(zero, 1, &zero.one_like(), -1, 4, |_| 6, n)
}
