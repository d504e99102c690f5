use super::report::{CheckRecord, CongruenceReport, ReportParams};
use super::seq::CoeffSeq;
use super::{RecurrenceSpec, DEFAULT_GUARD};
use crate::error::{Error, Result};
use crate::exactnum::PadicNum;

/// Which `(m, s)` pairs to test: `1 ≤ m ≤ m_max` with `p ∤ m` and
/// `1 ≤ s ≤ s_max`. With `index_limit` set, pairs with `m·p^s` beyond it are
/// dropped; otherwise every pair must be covered by the sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRange {
    pub m_max: u64,
    pub s_max: u32,
    pub index_limit: Option<u64>,
    pub guard: u32,
    pub observation: bool,
}

impl CheckRange {
    pub fn new(m_max: u64, s_max: u32) -> Self {
        CheckRange { m_max, s_max, index_limit: None, guard: DEFAULT_GUARD, observation: false }
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.index_limit = Some(limit);
        self
    }

    pub fn with_guard(mut self, guard: u32) -> Self {
        self.guard = guard;
        self
    }

    pub fn observed(mut self, observation: bool) -> Self {
        self.observation = observation;
        self
    }

    /// The tested pairs, in canonical order (s outer, m inner).
    pub fn pairs(&self, p: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        for s in 1..=self.s_max {
            let Some(ps) = p.checked_pow(s) else { break };
            for m in (1..=self.m_max).filter(|m| m % p != 0) {
                match (m.checked_mul(ps), self.index_limit) {
                    (Some(n), Some(l)) if n > l => continue,
                    (None, Some(_)) => continue,
                    _ => out.push((m, s)),
                }
            }
        }
        out
    }

    /// Largest index `m·p^s` over the tested pairs.
    pub fn max_index(&self, p: u64) -> u64 {
        self.pairs(p).iter().map(|&(m, s)| m * p.pow(s)).max().unwrap_or(0)
    }
}

/// `coeff · a_seq(m·p^{s−back})`, zero when `back > s`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearTerm {
    pub seq: usize,
    pub back: u32,
    pub coeff: PadicNum,
}

impl LinearTerm {
    pub fn new(seq: usize, back: u32, coeff: PadicNum) -> Self {
        LinearTerm { seq, back, coeff }
    }
}

/// Evaluate `Σ coeff·a(m·p^{s−back}) ≡ 0 (mod p^{exponent(s)})` on every
/// tested pair, reducing modulo `p^{max(E,0)+G}`.
pub fn check_linear(
    relation: &str,
    seqs: &[&CoeffSeq],
    p: u64,
    range: &CheckRange,
    exponent: impl Fn(u32) -> i64,
    terms: impl Fn(u64, u32) -> Result<Vec<LinearTerm>>,
) -> Result<Vec<CheckRecord>> {
    let available = seqs.iter().map(|s| s.max_index()).min().unwrap_or(0);
    let mut out = Vec::new();
    for (m, s) in range.pairs(p) {
        let top = m * p.pow(s);
        if top > available {
            return Err(Error::InsufficientCoefficients { needed: top, available });
        }
        let required = exponent(s);
        let cap = required.max(0) + range.guard as i64;
        let mut lhs = PadicNum::zero(p, cap);
        for t in terms(m, s)? {
            if t.back > s {
                continue;
            }
            let n = m * p.pow(s - t.back);
            let seq = seqs.get(t.seq).ok_or_else(|| Error::Config(format!("no sequence {}", t.seq)))?;
            let margin = (-t.coeff.valuation().unwrap_or(0)).max(0);
            let a = seq.padic(n, p, cap + margin + 1)?;
            lhs = lhs.add(&t.coeff.mul(&a));
        }
        let lhs = lhs.truncate_abs(cap);
        let achieved = lhs.valuation().unwrap_or_else(|| lhs.abs_precision());
        out.push(CheckRecord {
            relation: relation.to_string(),
            p,
            m,
            s,
            required,
            achieved,
            pass: achieved >= required,
            observation: range.observation,
        });
    }
    Ok(out)
}

fn report(source: &str, p: u64, n: u64, k: Vec<u32>, r: u32, checks: Vec<CheckRecord>) -> CongruenceReport {
    let mut rep = CongruenceReport::new(source, ReportParams { u: Vec::new(), p: vec![p], r, k, n });
    rep.checks = checks;
    rep.finalize()
}

/// `Σ_i p^{r(k−1)i}·A_i·γ^{m p^s (p^{ri}−1)/(p−1)}·a(m p^s / p^{ri}) ≡ 0 (mod p^{r(k−1)s + shift})`,
/// with `a(x) = 0` for non-integral `x`.
pub fn check_recurrence(seq: &CoeffSeq, spec: &RecurrenceSpec, range: &CheckRange) -> Result<CongruenceReport> {
    let p = spec.p;
    let cap = spec.required_exponent(range.s_max).max(0) + range.guard as i64 + 2;
    let prec = cap.max(1) as u32;
    let terms = |m: u64, s: u32| -> Result<Vec<LinearTerm>> {
        let mut out = Vec::new();
        for (i, a) in spec.coeffs.iter().enumerate() {
            let ri = spec.r * i as u32;
            if ri > s {
                break;
            }
            let scale = PadicNum::from_parts(p, (spec.r * (spec.k - 1) * i as u32) as i64, 1.into(), prec);
            let pri = p.pow(ri);
            let e = (m * p.pow(s)) as i64 * ((pri - 1) / (p - 1)) as i64;
            let g = spec.gamma.pow(e)?;
            out.push(LinearTerm::new(0, ri, scale.mul(a).mul(&g)));
        }
        Ok(out)
    };
    let checks = check_linear("recurrence", &[seq], p, range, |s| spec.required_exponent(s), terms)?;
    Ok(report(&seq.source, p, seq.max_index(), vec![spec.k], spec.r, checks))
}

/// `a(m p^s) − multiplier·a(m p^{s−1}) ≡ 0 (mod p^{exponent(s)})`.
pub fn check_two_term(
    seq: &CoeffSeq,
    multiplier: &PadicNum,
    exponent: impl Fn(u32) -> i64,
    p: u64,
    range: &CheckRange,
) -> Result<CongruenceReport> {
    let checks = check_linear("two-term", &[seq], p, range, exponent, |_, _| Ok(two_terms(0, 0, multiplier, p)))?;
    Ok(report(&seq.source, p, seq.max_index(), Vec::new(), 1, checks))
}

/// `a_A(m p^s) − multiplier·a_B(m p^{s−1}) ≡ 0 (mod p^{exponent(s)})`.
pub fn check_cross_term(
    seq_a: &CoeffSeq,
    seq_b: &CoeffSeq,
    multiplier: &PadicNum,
    exponent: impl Fn(u32) -> i64,
    p: u64,
    range: &CheckRange,
) -> Result<CongruenceReport> {
    let checks =
        check_linear("cross-term", &[seq_a, seq_b], p, range, exponent, |_, _| Ok(two_terms(0, 1, multiplier, p)))?;
    let n = seq_a.max_index().min(seq_b.max_index());
    Ok(report(&format!("{} / {}", seq_a.source, seq_b.source), p, n, Vec::new(), 1, checks))
}

pub(crate) fn two_terms(a: usize, b: usize, multiplier: &PadicNum, p: u64) -> Vec<LinearTerm> {
    let one = PadicNum::one(p, multiplier.abs_precision().max(1) as u32 + 64);
    vec![LinearTerm::new(a, 0, one), LinearTerm::new(b, 1, multiplier.neg())]
}
