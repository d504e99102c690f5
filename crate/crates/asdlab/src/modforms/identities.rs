use std::fmt;
use std::str::FromStr;

use super::catalog::{delta, eisenstein, j_invariant, lambda, theta_power};
use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational};
use crate::qseries::QSeries;

/// The derivative and Eisenstein identities on `Γ_1(4)` and `SL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `E_4 = (1 + 14λ + λ²)θ⁸`.
    E4Theta,
    /// `E_6 = (1 − 33λ − 33λ² + λ³)θ¹²`.
    E6Theta,
    /// `Dλ = λ(1 − λ)θ⁴`.
    LambdaDeriv,
    /// `Dθ^{2s} = (5λ − 1)s/12·θ^{2s+4} + s/12·θ^{2s}E_2` for `s = 1, 2, 3`.
    ThetaPowerDeriv,
    /// `D²λ = Dλ/6·((5 − 7λ)θ⁴ + E_2)`.
    LambdaSecondDeriv,
    /// `DE_2 = E_2²/12 − (1 + 14λ + λ²)θ⁸/12`.
    E2Deriv,
    /// `D³λ = Dλ/6·((37λ² − 58λ + 13)/4·θ⁸ + (5 − 7λ)/2·θ⁴E_2 + E_2²/4)`.
    LambdaThirdDeriv,
    /// `E_k E_{14−k} = −Δ·Dj` for `k = 4, 6, 8, 10, 14`.
    EisensteinJDeriv,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::E4Theta,
        Identity::E6Theta,
        Identity::LambdaDeriv,
        Identity::ThetaPowerDeriv,
        Identity::LambdaSecondDeriv,
        Identity::E2Deriv,
        Identity::LambdaThirdDeriv,
        Identity::EisensteinJDeriv,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::E4Theta => "e4-theta",
            Identity::E6Theta => "e6-theta",
            Identity::LambdaDeriv => "lambda-deriv",
            Identity::ThetaPowerDeriv => "theta-power-deriv",
            Identity::LambdaSecondDeriv => "lambda-second-deriv",
            Identity::E2Deriv => "e2-deriv",
            Identity::LambdaThirdDeriv => "lambda-third-deriv",
            Identity::EisensteinJDeriv => "eisenstein-j-deriv",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL.into_iter().find(|i| i.name() == s).ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

/// `Σ c_i λ^i` with rational coefficients.
fn poly_in(x: &QSeries<Rational>, coeffs: &[Rational]) -> QSeries<Rational> {
    let mut acc = QSeries::constant(coeffs[coeffs.len() - 1].clone(), 1, x.trunc());
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.times(x).add_const(c);
    }
    acc
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

/// Left and right sides of each instance of the identity, known to at least `n`.
pub fn identity_sides(id: Identity, n: i64) -> Result<Vec<(QSeries<Rational>, QSeries<Rational>)>> {
    let z = rat(0, 1);
    let m = n + 4;
    let lam = || lambda(&z, m);
    let th = |e: u32| theta_power(&z, e, m);
    let sides = match id {
        Identity::E4Theta => vec![(eisenstein(&z, 4, m)?, poly_in(&lam(), &ints(&[1, 14, 1])).times(&th(8)))],
        Identity::E6Theta => {
            vec![(eisenstein(&z, 6, m)?, poly_in(&lam(), &ints(&[1, -33, -33, 1])).times(&th(12)))]
        }
        Identity::LambdaDeriv => {
            let l = lam();
            vec![(l.theta_deriv(), poly_in(&l, &ints(&[0, 1, -1])).times(&th(4)))]
        }
        Identity::ThetaPowerDeriv => {
            let l = lam();
            let e2 = eisenstein(&z, 2, m)?;
            (1..=3u32)
                .map(|s| {
                    let lhs = th(2 * s).theta_deriv();
                    let a = poly_in(&l, &[rat(-(s as i64), 12), rat(5 * s as i64, 12)]).times(&th(2 * s + 4));
                    let b = th(2 * s).times(&e2).scale(&rat(s as i64, 12));
                    (lhs, a.plus(&b))
                })
                .collect()
        }
        Identity::LambdaSecondDeriv => {
            let l = lam();
            let dl = l.theta_deriv();
            let e2 = eisenstein(&z, 2, m)?;
            let inner = poly_in(&l, &ints(&[5, -7])).times(&th(4)).plus(&e2);
            vec![(dl.theta_deriv(), dl.times(&inner).scale(&rat(1, 6)))]
        }
        Identity::E2Deriv => {
            let l = lam();
            let e2 = eisenstein(&z, 2, m)?;
            let rhs = e2.pow(2).minus(&poly_in(&l, &ints(&[1, 14, 1])).times(&th(8))).scale(&rat(1, 12));
            vec![(e2.theta_deriv(), rhs)]
        }
        Identity::LambdaThirdDeriv => {
            let l = lam();
            let dl = l.theta_deriv();
            let e2 = eisenstein(&z, 2, m)?;
            let t8 = poly_in(&l, &[rat(13, 4), rat(-58, 4), rat(37, 4)]).times(&th(8));
            let t4 = poly_in(&l, &[rat(5, 2), rat(-7, 2)]).times(&th(4)).times(&e2);
            let t0 = e2.pow(2).scale(&rat(1, 4));
            let rhs = dl.times(&t8.plus(&t4).plus(&t0)).scale(&rat(1, 6));
            vec![(dl.theta_deriv().theta_deriv(), rhs)]
        }
        Identity::EisensteinJDeriv => {
            let dj = j_invariant(&z, m)?.theta_deriv();
            let d = delta(&z, m);
            let rhs = d.times(&dj).negated();
            let mut out = Vec::new();
            for k in [4u32, 6, 8, 10, 14] {
                let ek = eisenstein(&z, k, m)?;
                let lhs = if k == 14 { ek } else { ek.times(&eisenstein(&z, 14 - k, m)?) };
                out.push((lhs, rhs.clone()));
            }
            out
        }
    };
    Ok(sides)
}

/// Both sides agree below index `n`.
pub fn verify_identity(id: Identity, n: i64) -> Result<bool> {
    for (lhs, rhs) in identity_sides(id, n)? {
        if !lhs.compare_upto(&rhs, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}
