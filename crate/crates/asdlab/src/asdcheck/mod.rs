//! Verification of congruences between Fourier coefficients.
//!
//! Sequences are either exact rationals or residues modulo `p^K`; every check
//! reduces a linear combination of coefficients modulo `p^(E+G)` with `E` the
//! required exponent and `G` a guard, and records the achieved valuation.

mod checks;
mod primes;
mod report;
mod scenario;
mod seq;

pub use checks::{check_cross_term, check_linear, check_recurrence, check_two_term, CheckRange, LinearTerm};
pub use primes::{is_good_prime, j_shift, j_shift_bounds, pole_factor, GoodPrime, PoleFactor};
pub use report::{CheckRecord, CongruenceReport, FactRecord, ReportParams, SkipRecord, Summary};
pub use scenario::{
    c4_odd_quotient_exceptions, registry, run_scenario, scenario_names, weierstrass_a_p, Overrides, Registry,
    ScenarioDefaults, ScenarioEntry,
};
pub use seq::{CoeffSeq, SeqValues};

/// Guard digits added to the largest required exponent.
pub const DEFAULT_GUARD: u32 = 10;

/// A linear congruence with integer-valued coefficients `A_0, …, A_d`
/// (`A_i` multiplies `T^i`), weight `k`, residue degree `r`, the constant
/// `γ_p` and the shift `j_{f,p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSpec {
    pub p: u64,
    pub r: u32,
    pub k: u32,
    pub coeffs: Vec<crate::exactnum::PadicNum>,
    pub gamma: crate::exactnum::PadicNum,
    pub shift: i64,
}

impl RecurrenceSpec {
    /// Number of terms minus one.
    pub fn d(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `r(k−1)s + shift`.
    pub fn required_exponent(&self, s: u32) -> i64 {
        (self.r as i64) * (self.k as i64 - 1) * s as i64 + self.shift
    }
}
