use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{check_linear, check_recurrence, two_terms, CheckRange, LinearTerm};
use super::primes::{is_good_prime, j_shift, pole_factor};
use super::report::{CheckRecord, CongruenceReport, FactRecord, ReportParams};
use super::seq::CoeffSeq;
use super::RecurrenceSpec;
use crate::elliptic::{count_ext, count_reduction, j_line_family, tate_u_family, weierstrass_u_family, Curve};
use crate::error::{Error, Result};
use crate::exactnum::{
    format_rational, kronecker, morita_gamma, parse_rational, rat, unit_root, PadicNum, Quad, Rational, Zmod64,
    ZmodBig, ZMOD64_LIMIT,
};
use crate::modforms::{FormId, FormStore};

const REGISTRY_JSON: &str = include_str!("../../data/registry.json");

/// Largest `p^n` for which Morita's Γ_p is evaluated by direct products.
const GAMMA_PRODUCT_LIMIT: u64 = 10_000_000;

/// Default parameters of one scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioEntry {
    pub name: String,
    pub summary: String,
    pub primes: Vec<u64>,
    #[serde(default)]
    pub observe_primes: Vec<u64>,
    #[serde(default)]
    pub k: Vec<u32>,
    #[serde(default)]
    pub u: Vec<String>,
    #[serde(default)]
    pub c1: Option<String>,
    #[serde(default)]
    pub c2: Option<String>,
    #[serde(default)]
    pub j: Option<String>,
    #[serde(default)]
    pub cm_disc: Option<i64>,
    pub m_max: u64,
    pub s_max: u32,
    pub coeffs: u64,
    #[serde(default)]
    pub guard: Option<u32>,
    #[serde(default)]
    pub bound: Option<u64>,
}

/// Alias kept for the report vocabulary.
pub type ScenarioDefaults = ScenarioEntry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    pub version: u32,
    pub scenarios: Vec<ScenarioEntry>,
}

/// The registry shipped with the crate.
pub fn registry() -> Registry {
    serde_json::from_str(REGISTRY_JSON).expect("bundled registry parses")
}

pub fn scenario_names() -> Vec<String> {
    registry().scenarios.into_iter().map(|s| s.name).collect()
}

/// Command-line style adjustments to a scenario's defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub primes: Option<Vec<u64>>,
    pub m_max: Option<u64>,
    pub s_max: Option<u32>,
    pub coeffs: Option<u64>,
    pub guard: Option<u32>,
    /// Run primes outside the hypotheses in observation mode instead of skipping them.
    pub observe: bool,
    /// Multiply every sequence by this rational before checking.
    pub scale: Option<Rational>,
    /// Bound for auxiliary exact checks (denominators, `B_p` parity).
    pub bound: Option<u64>,
}

/// How a prime takes part in a run.
enum Mode {
    Assert,
    Observe,
    Skip(String),
}

struct Ctx<'a> {
    entry: ScenarioEntry,
    store: &'a FormStore,
    observe_all: bool,
    scale: Option<Rational>,
}

impl Ctx<'_> {
    fn guard(&self) -> u32 {
        self.entry.guard.unwrap_or(super::DEFAULT_GUARD)
    }

    /// Tested pairs at `p`, with `s` capped where `p^s` exceeds the coefficient count.
    fn range(&self, p: u64, observation: bool) -> CheckRange {
        let mut s_max = self.entry.s_max;
        while s_max > 1 && p.checked_pow(s_max).is_none_or(|v| v > self.entry.coeffs) {
            s_max -= 1;
        }
        CheckRange::new(self.entry.m_max, s_max)
            .with_limit(self.entry.coeffs)
            .with_guard(self.guard())
            .observed(observation)
    }

    /// Mode for `p` given the reasons it falls outside the hypotheses.
    fn mode(&self, p: u64, reasons: Vec<String>) -> Mode {
        if self.entry.observe_primes.contains(&p) {
            Mode::Observe
        } else if reasons.is_empty() {
            Mode::Assert
        } else if self.observe_all {
            Mode::Observe
        } else {
            Mode::Skip(reasons.join("; "))
        }
    }

    fn u_values(&self) -> Result<Vec<Rational>> {
        self.entry.u.iter().map(|s| parse_rational(s)).collect()
    }

    fn param(&self, v: &Option<String>, what: &str) -> Result<Rational> {
        let s = v.as_ref().ok_or_else(|| Error::Config(format!("scenario {} needs {what}", self.entry.name)))?;
        parse_rational(s)
    }

    /// Coefficients `a(0..=n_max)` of `id`, modulo `p^prec` when the form is
    /// p-integral and exactly otherwise.
    fn sequence(&self, id: &FormId, p: u64, prec: u32, n_max: u64) -> Result<CoeffSeq> {
        let n = n_max as i64 + 1;
        let name = id.to_string();
        let modulus = BigUint::from(p).pow(prec);
        let residue = if modulus < BigUint::from(ZMOD64_LIMIT) {
            let zero = Zmod64::modulus_zero(modulus.to_u64().expect("fits"));
            self.store.get(id, &zero, n).and_then(|f| CoeffSeq::from_residue_series(&name, &f, p, prec))
        } else {
            let zero = ZmodBig { v: BigUint::zero(), m: Arc::new(modulus) };
            self.store.get(id, &zero, n).and_then(|f| CoeffSeq::from_residue_series(&name, &f, p, prec))
        };
        let seq = match residue {
            Err(Error::NotInRing(_)) => {
                let f = self.store.get(id, &rat(0, 1), n)?;
                CoeffSeq::from_rational_series(&name, &f)?
            }
            other => other?,
        };
        match &self.scale {
            Some(c) => seq.scaled(c),
            None => Ok(seq),
        }
    }
}

fn exact(n: i64, p: u64, prec: u32) -> PadicNum {
    PadicNum::from_int(n, p, prec)
}

fn fact(name: &str, p: Option<u64>, pass: bool, detail: String, observation: bool) -> FactRecord {
    FactRecord { name: name.to_string(), p, pass, detail, observation }
}

/// `(a_p, good reduction)` of an integral model at `p`.
fn trace_at(curve: &Curve<Rational>, p: u64) -> Result<(i64, bool)> {
    let good = !crate::exactnum::valuation(&curve.discriminant(), p).is_some_and(|v| v > 0);
    let (a_p, _) = count_reduction(curve, p)?;
    Ok((a_p, good))
}

/// `a_p` of the curve `y² = 4x³ − (1+14u+u²)/12·x + (1−33u−33u²+u³)/216`.
pub fn weierstrass_a_p(u: &Rational, p: u64) -> Result<i64> {
    let curve = weierstrass_u_family(u)?.curve;
    let (a, good) = trace_at(&curve, p)?;
    if !good {
        return Err(Error::BadReduction(p));
    }
    Ok(a)
}

/// `M` such that the forms attached to `u` are defined over `Z[1/M]`: `6·num(u)·den(u)`.
fn level_of(u: &Rational) -> u64 {
    let n = u.numer().abs().to_u64().unwrap_or(1).max(1);
    let d = u.denom().to_u64().unwrap_or(1);
    6 * n * d
}

fn required_max(exponent: &dyn Fn(u32) -> i64, s_max: u32) -> i64 {
    (1..=s_max).map(exponent).max().unwrap_or(0).max(0)
}

type PrimeResult = Result<(Vec<CheckRecord>, Vec<FactRecord>)>;

/// Run `work` for each prime in parallel, keeping the canonical order.
fn per_prime(
    report: &mut CongruenceReport,
    primes: &[u64],
    classify: impl Fn(u64) -> Result<Mode> + Sync,
    work: impl Fn(u64, bool) -> PrimeResult + Sync,
) -> Result<()> {
    let outcomes: Vec<(u64, Result<Option<(Vec<CheckRecord>, Vec<FactRecord>)>>, Option<String>)> = primes
        .par_iter()
        .map(|&p| match classify(p) {
            Ok(Mode::Skip(reason)) => (p, Ok(None), Some(reason)),
            Ok(Mode::Assert) => (p, work(p, false).map(Some), None),
            Ok(Mode::Observe) => match work(p, true) {
                Ok(v) => (p, Ok(Some(v)), None),
                Err(e) => (p, Ok(None), Some(format!("observation not possible: {e}"))),
            },
            Err(e) => (p, Err(e), None),
        })
        .collect();
    for (p, out, skip) in outcomes {
        if let Some(reason) = skip {
            report.skipped.push(super::report::SkipRecord { p, reason });
            continue;
        }
        if let Some((checks, facts)) = out? {
            report.checks.extend(checks);
            report.facts.extend(facts);
        }
    }
    Ok(())
}

/// Run a registered scenario with optional overrides.
pub fn run_scenario(name: &str, overrides: &Overrides, store: &FormStore) -> Result<CongruenceReport> {
    let mut entry =
        registry().scenarios.into_iter().find(|s| s.name == name).ok_or_else(|| {
            Error::Config(format!("unknown scenario {name:?}; known: {}", scenario_names().join(", ")))
        })?;
    if let Some(ps) = &overrides.primes {
        entry.primes = ps.iter().copied().filter(|p| !entry.observe_primes.contains(p)).collect();
        entry.observe_primes.retain(|p| ps.contains(p));
    }
    entry.m_max = overrides.m_max.unwrap_or(entry.m_max);
    entry.s_max = overrides.s_max.unwrap_or(entry.s_max);
    entry.coeffs = overrides.coeffs.unwrap_or(entry.coeffs);
    entry.guard = overrides.guard.or(entry.guard);
    entry.bound = overrides.bound.or(entry.bound);
    let mut all: Vec<u64> = entry.primes.iter().chain(&entry.observe_primes).copied().collect();
    all.sort();
    all.dedup();
    let params = ReportParams { u: entry.u.clone(), p: all.clone(), r: 1, k: entry.k.clone(), n: entry.coeffs };
    let mut report = CongruenceReport::new(name, params);
    let ctx = Ctx { entry, store, observe_all: overrides.observe, scale: overrides.scale.clone() };
    match name {
        "unit-root-w3-f" | "unit-root-w3-g" | "unit-root-w4-f" | "unit-root-w4-g" | "unit-root-w4-h"
        | "unit-root-w5" => unit_root_family(&ctx, &all, &mut report)?,
        "lambda-pole-three-term" => three_term(&ctx, &all, &mut report)?,
        "gamma2-five-term" => gamma2_five_term(&ctx, &all, &mut report)?,
        "gamma2-h2" => gamma2_h2(&ctx, &all, &mut report)?,
        "magnetic-c4" => magnetic_c4(&ctx, &all, &mut report)?,
        "level-one-r0" => level_one(&ctx, &all, &mut report)?,
        "lambda-two-pair" => lambda_two_pair(&ctx, &all, &mut report)?,
        "lambda-two-cross" => lambda_two_cross(&ctx, &all, &mut report)?,
        "cm-frobenius-trace" => {
            report.params.r = 2;
            cm_frobenius_trace(&ctx, &all, &mut report)?
        }
        _ => return Err(Error::Config(format!("scenario {name:?} has no runner"))),
    }
    Ok(report.finalize())
}

/// Reasons a prime falls outside the unit-root theorems for the curve of `u`.
fn unit_root_reasons(ctx: &Ctx, u: &Rational, k: u32, p: u64) -> Result<Vec<String>> {
    let disc = ctx.entry.cm_disc.unwrap_or(1);
    let pole = Quad::new(u.clone(), rat(0, 1), rat(disc, 1));
    let mut reasons = is_good_prime(level_of(u), k, 1, &[pole], p).reasons;
    if p < 5 {
        reasons.push(format!("p = {p} < 5"));
    }
    if disc != 1 && kronecker(disc, p as i64) != 1 {
        reasons.push(format!("p = {p} does not split in the CM field of discriminant {disc}"));
    }
    if reasons.is_empty() {
        let curve = weierstrass_u_family(u)?.curve;
        let (a_p, good) = trace_at(&curve, p)?;
        if !good {
            reasons.push(format!("E_u has bad reduction at {p}"));
        } else if a_p.rem_euclid(p as i64) == 0 {
            reasons.push(format!("E_u is supersingular at {p}"));
        }
    }
    Ok(reasons)
}

fn unit_root_family(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    let name = ctx.entry.name.as_str();
    let u = ctx.u_values()?.first().cloned().ok_or_else(|| Error::Config("missing u".into()))?;
    let k = match name {
        "unit-root-w3-f" | "unit-root-w3-g" => 3,
        "unit-root-w5" => 5,
        _ => 4,
    };
    let (c1, c2) = match name {
        "unit-root-w3-g" | "unit-root-w4-g" | "unit-root-w4-h" => {
            (ctx.param(&ctx.entry.c1, "c1")?, ctx.param(&ctx.entry.c2, "c2")?)
        }
        _ => (rat(1, 1), rat(0, 1)),
    };
    let id = match name {
        "unit-root-w3-f" => FormId::MeroW3F { u: u.clone() },
        "unit-root-w3-g" => FormId::MeroW3G { u: u.clone(), c1, c2 },
        "unit-root-w4-f" => FormId::MeroW4F { u: u.clone() },
        "unit-root-w4-g" => FormId::MeroW4G { u: u.clone(), c1, c2 },
        "unit-root-w4-h" => FormId::MeroW4H { u: u.clone(), c1, c2 },
        _ => {
            if u != rat(1, 2) {
                return Err(Error::Config("the weight 5 form has its pole at u = 1/2".into()));
            }
            FormId::MeroW5
        }
    };
    let exponent = move |s: u32| (k as i64 - 1) * s as i64;
    per_prime(
        report,
        primes,
        |p| Ok(ctx.mode(p, unit_root_reasons(ctx, &u, k, p)?)),
        |p, obs| {
            let range = ctx.range(p, obs);
            let prec = (required_max(&exponent, range.s_max) + range.guard as i64 + 2) as u32;
            let a_p = weierstrass_a_p(&u, p)?;
            let mu = unit_root(a_p, p, prec)?;
            let pp = exact(p as i64, p, prec);
            let multiplier = match name {
                "unit-root-w3-f" => mu.clone(),
                "unit-root-w3-g" => pp.div(&mu)?,
                "unit-root-w4-f" => mu.mul(&mu),
                "unit-root-w4-g" => pp.clone(),
                "unit-root-w4-h" => pp.mul(&pp).div(&mu.mul(&mu))?,
                _ => mu.pow(3)?,
            };
            let seq = ctx.sequence(&id, p, prec, range.max_index(p))?;
            let rel = format!("{id}");
            let checks = check_linear(&rel, &[&seq], p, &range, exponent, |_, _| Ok(two_terms(0, 0, &multiplier, p)))?;
            Ok((checks, Vec::new()))
        },
    )
}

fn three_term(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    for u in ctx.u_values()? {
        let curve = weierstrass_u_family(&u)?.curve;
        let id = FormId::MeroW3F { u: u.clone() };
        let classify = |p: u64| -> Result<Mode> {
            let pole = Quad::new(u.clone(), rat(0, 1), rat(1, 1));
            let mut reasons = is_good_prime(level_of(&u), 3, 1, &[pole], p).reasons;
            if reasons.is_empty() && !trace_at(&curve, p)?.1 {
                reasons.push(format!("E_u has bad reduction at {p}"));
            }
            Ok(ctx.mode(p, reasons))
        };
        per_prime(report, primes, classify, |p, obs| {
            let range = ctx.range(p, obs);
            let shift = j_shift(3, 1, 0, p);
            let full = move |s: u32| 2 * s as i64 + shift;
            let prec = (required_max(&full, range.s_max) + range.guard as i64 + 2) as u32;
            let (a_p, _) = trace_at(&curve, p)?;
            let seq = ctx.sequence(&id, p, prec, range.max_index(p))?;
            let spec = RecurrenceSpec {
                p,
                r: 1,
                k: 3,
                coeffs: pole_factor(3, p, 1, a_p)
                    .iter()
                    .map(|c| PadicNum::from_rational(&c.clone().into(), p, prec))
                    .collect(),
                gamma: PadicNum::one(p, prec),
                shift,
            };
            let mut checks = check_recurrence(&seq, &spec, &range)?.checks;
            for c in &mut checks {
                c.relation = format!("u={} pole-factor sum", format_rational(&u));
            }
            let divided = [1, -a_p, p as i64].map(|c| exact(c, p, prec));
            let rel = format!("u={} three-term", format_rational(&u));
            let terms =
                |_, _| Ok(divided.iter().enumerate().map(|(i, c)| LinearTerm::new(0, i as u32, c.clone())).collect());
            checks.extend(check_linear(&rel, &[&seq], p, &range, |s| 2 * s as i64 - 1, terms)?);
            Ok((checks, Vec::new()))
        })?;
    }
    Ok(())
}

/// `B_p`: coefficients of `η(4τ)^6 = q·Π(1 − q^{4n})^6` up to index `n_max`.
fn eta4_coeffs(ctx: &Ctx, n_max: u64) -> Result<Vec<BigInt>> {
    let f = ctx.store.get(&FormId::Eta4Pow6, &rat(0, 1), n_max as i64 + 1)?;
    f.coeff_range(0, n_max as i64 + 1)?
        .into_iter()
        .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::NotInRing(format_rational(&c))) })
        .collect()
}

fn gamma2_five_term(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    let u = ctx.u_values()?.first().cloned().ok_or_else(|| Error::Config("missing u".into()))?;
    let curve = tate_u_family(&u).curve;
    // The printed normalization carries an extra factor t and is only observed.
    let forms = [(FormId::Gamma2Cusp { u: u.clone() }, false), (FormId::Gamma2 { u: u.clone() }, true)];
    let b = eta4_coeffs(ctx, primes.iter().copied().max().unwrap_or(0))?;
    let classify = |p: u64| -> Result<Mode> {
        let mut reasons = Vec::new();
        if p < 3 || p == 5 {
            reasons.push(format!("p = {p} is 2, 3 or 5"));
        }
        let pole = Quad::new(u.clone(), rat(0, 1), rat(1, 1));
        reasons.extend(is_good_prime(10 * level_of(&u) / 6, 3, 1, &[pole], p).reasons);
        if reasons.is_empty() && !trace_at(&curve, p)?.1 {
            reasons.push(format!("E_u has bad reduction at {p}"));
        }
        Ok(ctx.mode(p, reasons))
    };
    per_prime(report, primes, classify, |p, obs| {
        let range = ctx.range(p, obs);
        let exponent = |s: u32| 2 * s as i64 - 3;
        let prec = (required_max(&exponent, range.s_max) + range.guard as i64 + 2) as u32;
        let (a, good) = trace_at(&curve, p)?;
        let chi = kronecker(-1, p as i64) as i64;
        let bp = b[p as usize].to_i64().ok_or_else(|| Error::Config("B_p out of range".into()))?;
        let pi = p as i64;
        let coeffs =
            [1, -(a + chi * bp), chi * bp * a + pi + chi * pi * pi, -chi * (bp + a * pi * pi), chi * pi * pi * pi];
        let coeffs: Vec<PadicNum> = coeffs.iter().map(|&c| exact(c, p, prec)).collect();
        // At bad reduction the curve factor drops to T − a_p.
        let degenerate = [1, -(a + chi * bp), chi * bp * a + chi * pi * pi, -chi * a * pi * pi];
        let degenerate: Vec<PadicNum> = degenerate.iter().map(|&c| exact(c, p, prec)).collect();
        let terms =
            |_, _| Ok(coeffs.iter().enumerate().map(|(i, c)| LinearTerm::new(0, i as u32, c.clone())).collect());
        let mut checks = Vec::new();
        for (id, printed) in &forms {
            let range = ctx.range(p, obs || *printed);
            let seq = ctx.sequence(id, p, prec, range.max_index(p))?;
            checks.extend(check_linear(&format!("{id} five-term"), &[&seq], p, &range, exponent, terms)?);
            if !good {
                let terms = |_, _| {
                    Ok(degenerate.iter().enumerate().map(|(i, c)| LinearTerm::new(0, i as u32, c.clone())).collect())
                };
                checks.extend(check_linear(
                    &format!("{id} bad-reduction four-term"),
                    &[&seq],
                    p,
                    &range,
                    exponent,
                    terms,
                )?);
            }
        }
        let detail = format!("a_p = {a}, B_p = {bp}, chi(p) = {chi}, good reduction {good}");
        Ok((checks, vec![fact("five-term inputs", Some(p), true, detail, obs)]))
    })
}

fn gamma2_h2(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    let bound = ctx.entry.bound.unwrap_or(200).max(primes.iter().copied().max().unwrap_or(0));
    let b = eta4_coeffs(ctx, bound)?;
    let nonzero: Vec<u64> = crate::exactnum::fp::primes_between(3, bound + 1)
        .into_iter()
        .filter(|&q| q % 4 == 3 && !b[q as usize].is_zero())
        .collect();
    report.facts.push(fact(
        "B_p vanishes for p = 3 mod 4",
        None,
        nonzero.is_empty(),
        format!("checked primes p <= {bound}; exceptions {nonzero:?}"),
        false,
    ));
    let classify = |p: u64| -> Result<Mode> {
        let reasons = if p < 7 { vec![format!("p = {p} < 7")] } else { Vec::new() };
        Ok(ctx.mode(p, reasons))
    };
    per_prime(report, primes, classify, |p, obs| {
        let range = ctx.range(p, obs);
        let exponent = |s: u32| 2 * s as i64;
        let prec = (required_max(&exponent, range.s_max) + range.guard as i64 + 2) as u32;
        let chi = kronecker(-1, p as i64) as i64;
        let bp = b[p as usize].to_i64().ok_or_else(|| Error::Config("B_p out of range".into()))?;
        let coeffs = [1, -bp, chi * (p * p) as i64].map(|c| exact(c, p, prec));
        let terms =
            |_, _| Ok(coeffs.iter().enumerate().map(|(i, c)| LinearTerm::new(0, i as u32, c.clone())).collect());
        let mut checks = Vec::new();
        // The printed h2 = F·t_2 is observed next to the cusp form F/t_2.
        for (id, printed) in [(FormId::H2Cusp, false), (FormId::H2, true)] {
            let range = ctx.range(p, obs || printed);
            let seq = ctx.sequence(&id, p, prec, range.max_index(p))?;
            checks.extend(check_linear(&format!("{id} three-term"), &[&seq], p, &range, exponent, terms)?);
        }
        Ok((checks, Vec::new()))
    })
}

/// Odd `n ≤ bound` with `c(n)/n ∉ Z[1/2]`. With `Y = 3·C_4` integral this is
/// `3n ∤ Y(n)`, decided one odd prime at a time from `Y` modulo products of
/// prime powers below the word-size limit.
pub fn c4_odd_quotient_exceptions(bound: u64) -> Result<Vec<u64>> {
    let mut blocks: Vec<Vec<(u64, u32)>> = vec![Vec::new()];
    let mut modulus = 1u64;
    for l in crate::exactnum::fp::primes_between(3, bound + 1) {
        let mut e = 1u32;
        while l.pow(e + 1) <= bound {
            e += 1;
        }
        if l == 3 {
            e += 1;
        }
        let q = l.pow(e);
        if modulus.checked_mul(q).is_none_or(|m| m >= ZMOD64_LIMIT) {
            blocks.push(Vec::new());
            modulus = 1;
        }
        modulus *= q;
        blocks.last_mut().expect("nonempty").push((l, e));
    }
    let n = bound as i64 + 1;
    let bad: Vec<Vec<u64>> = blocks
        .par_iter()
        .map(|block| -> Result<Vec<u64>> {
            let m: u64 = block.iter().map(|&(l, e)| l.pow(e)).product();
            let y = crate::modforms::c4_times_three(&Zmod64::modulus_zero(m), n)?;
            let mut out = Vec::new();
            for k in (1..=bound).step_by(2) {
                let v = y.coeff_index(k as i64)?.v;
                for &(l, e) in block {
                    let mut need = 0;
                    let mut r = k;
                    while r % l == 0 {
                        need += 1;
                        r /= l;
                    }
                    if l == 3 {
                        need += 1;
                    }
                    if need > 0 && v % l.pow(need.min(e)) != 0 {
                        out.push(k);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut bad: Vec<u64> = bad.into_iter().flatten().collect();
    bad.sort();
    bad.dedup();
    Ok(bad)
}

fn magnetic_c4(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    if let Some(bound) = ctx.entry.bound {
        let bad = c4_odd_quotient_exceptions(bound)?;
        report.facts.push(fact(
            "c(n)/n lies in Z[1/2] for odd n",
            None,
            bad.is_empty(),
            format!("odd n <= {bound}; exceptions {:?}", &bad[..bad.len().min(10)]),
            false,
        ));
    }
    per_prime(
        report,
        primes,
        |p| Ok(ctx.mode(p, if p < 3 { vec!["p = 2".into()] } else { Vec::new() })),
        |p, obs| {
            let range = ctx.range(p, obs);
            let exponent = |s: u32| 3 * s as i64;
            let prec = (required_max(&exponent, range.s_max) + range.guard as i64 + 2) as u32;
            let mult = exact(p as i64 * kronecker(-1, p as i64) as i64, p, prec);
            let seq = ctx.sequence(&FormId::C4, p, prec, range.max_index(p))?;
            let checks =
                check_linear("C4 two-term", &[&seq], p, &range, exponent, |_, _| Ok(two_terms(0, 0, &mult, p)))?;
            Ok((checks, Vec::new()))
        },
    )
}

fn level_one(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    let j = ctx.param(&ctx.entry.j, "j")?;
    let disc = ctx.entry.cm_disc.ok_or_else(|| Error::Config("level-one-r0 needs cm_disc".into()))?;
    let curve = j_line_family(&j)?.curve;
    for &k in &ctx.entry.k.clone() {
        let id = FormId::Level1 { k, j: j.clone() };
        let classify = |p: u64| -> Result<Mode> {
            let mut reasons = Vec::new();
            if kronecker(disc, p as i64) != 1 {
                reasons.push(format!("p = {p} does not split in the CM field of discriminant {disc}"));
            }
            if (2..=(k as u64).saturating_sub(2)).any(|i| i % p == 0) {
                reasons.push(format!("p = {p} divides (k-2)! for k = {k}"));
            }
            if reasons.is_empty() {
                let (a, good) = trace_at(&curve, p)?;
                if !good {
                    reasons.push(format!("the curve has bad reduction at {p}"));
                } else if a.rem_euclid(p as i64) == 0 {
                    reasons.push(format!("the curve is supersingular at {p}"));
                }
            }
            Ok(ctx.mode(p, reasons))
        };
        per_prime(report, primes, classify, |p, obs| {
            let range = ctx.range(p, obs);
            let exponent = move |s: u32| (k as i64 - 1) * s as i64;
            let prec = (required_max(&exponent, range.s_max) + range.guard as i64 + 2) as u32;
            let (a, _) = trace_at(&curve, p)?;
            let mult = unit_root(a, p, prec)?.pow(k as i64 - 2)?;
            let seq = ctx.sequence(&id, p, prec, range.max_index(p))?;
            let rel = format!("k={k} r=0");
            let checks = check_linear(&rel, &[&seq], p, &range, exponent, |_, _| Ok(two_terms(0, 0, &mult, p)))?;
            Ok((checks, Vec::new()))
        })?;
    }
    Ok(())
}

/// `−(2/p)·Γ_p(1/2)·Γ_p(1/4)²` to the largest precision `n ≤ want` with `p^n` within the product limit.
fn gamma_quarter_constant(p: u64, want: u32) -> Result<PadicNum> {
    let mut n = 1u32;
    while n < want && p.checked_pow(n + 1).is_some_and(|v| v <= GAMMA_PRODUCT_LIMIT) {
        n += 1;
    }
    let g2 = morita_gamma(&rat(1, 2), p, n)?;
    let g4 = morita_gamma(&rat(1, 4), p, n)?;
    let sign = -(kronecker(2, p as i64) as i64);
    Ok(exact(sign, p, n).mul(&g2).mul(&g4).mul(&g4))
}

fn lambda_two_pair(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    let u = rat(2, 1);
    let classify = |p: u64| -> Result<Mode> {
        let mut reasons = unit_root_reasons(ctx, &u, 3, p)?;
        if p % 4 != 1 {
            reasons.push(format!("p = {p} is not 1 mod 4"));
        }
        Ok(ctx.mode(p, reasons))
    };
    per_prime(report, primes, classify, |p, obs| {
        let range = ctx.range(p, obs);
        let exponent = |s: u32| 2 * s as i64;
        let prec = (required_max(&exponent, range.s_max) + range.guard as i64 + 2) as u32;
        let a = weierstrass_a_p(&u, p)?;
        let mu = unit_root(a, p, prec)?;
        let other = exact(p as i64, p, prec).div(&mu)?;
        let n_max = range.max_index(p);
        let f = ctx.sequence(&FormId::LambdaPoleF, p, prec, n_max)?;
        let g = ctx.sequence(&FormId::LambdaPoleG, p, prec, n_max)?;
        let mut checks = check_linear("f unit root", &[&f], p, &range, exponent, |_, _| Ok(two_terms(0, 0, &mu, p)))?;
        checks
            .extend(check_linear("g p/unit root", &[&g], p, &range, exponent, |_, _| Ok(two_terms(0, 0, &other, p)))?);
        let gamma = gamma_quarter_constant(p, prec)?;
        let n = gamma.abs_precision();
        let agree = gamma.eq_mod(&mu, n);
        let detail = format!("unit root = -(2/p) Gamma_p(1/2) Gamma_p(1/4)^2 modulo {p}^{n}");
        Ok((checks, vec![fact("unit root as a Gamma_p product", Some(p), agree, detail, obs)]))
    })
}

fn lambda_two_cross(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    if let Some(p) = primes.iter().find(|&&p| p % 4 != 3) {
        return Err(Error::Config(format!("the cross relations are only asserted for p = 3 mod 4, got {p}")));
    }
    per_prime(
        report,
        primes,
        |p| Ok(ctx.mode(p, Vec::new())),
        |p, obs| {
            let range = ctx.range(p, obs);
            let exponent = |s: u32| 2 * s as i64;
            let want = (required_max(&exponent, range.s_max) + range.guard as i64) as u32;
            let mu = gamma_quarter_constant(p, want)?;
            let prec = mu.abs_precision().max(1) as u32;
            if (prec as i64) < required_max(&exponent, range.s_max) {
                return Err(Error::Config(format!("Gamma_p precision {prec} below the required exponent at p = {p}")));
            }
            let four = exact(4, p, prec);
            let to_g = four.div(&mu)?;
            let to_f = exact(p as i64, p, prec).mul(&mu).div(&four)?.neg();
            let n_max = range.max_index(p);
            let f = ctx.sequence(&FormId::LambdaPoleF, p, prec + 2, n_max)?;
            let g = ctx.sequence(&FormId::LambdaPoleG, p, prec + 2, n_max)?;
            let mut checks =
                check_linear("g from f: 4/mu", &[&g, &f], p, &range, exponent, |_, _| Ok(two_terms(0, 1, &to_g, p)))?;
            checks.extend(check_linear("f from g: -p mu/4", &[&f, &g], p, &range, exponent, |_, _| {
                Ok(two_terms(0, 1, &to_f, p))
            })?);
            Ok((checks, Vec::new()))
        },
    )
}

fn cm_frobenius_trace(ctx: &Ctx, primes: &[u64], report: &mut CongruenceReport) -> Result<()> {
    let u = ctx.u_values()?.first().cloned().ok_or_else(|| Error::Config("missing u".into()))?;
    let c1 = ctx.param(&ctx.entry.c1, "c1")?;
    let c2 = ctx.param(&ctx.entry.c2, "c2")?;
    let f_id = FormId::MeroW3F { u: u.clone() };
    let g_id = FormId::MeroW3G { u: u.clone(), c1, c2 };
    let classify = |p: u64| -> Result<Mode> {
        let pole = Quad::new(u.clone(), rat(0, 1), rat(1, 1));
        let mut reasons = is_good_prime(level_of(&u), 3, 1, &[pole], p).reasons;
        if reasons.is_empty() && weierstrass_a_p(&u, p).is_err() {
            reasons.push(format!("E_u has bad reduction at {p}"));
        }
        Ok(ctx.mode(p, reasons))
    };
    per_prime(report, primes, classify, |p, obs| {
        let a = weierstrass_a_p(&u, p)?;
        let mut s = 1u32;
        while s < ctx.entry.s_max && p.pow(s + 1) <= ctx.entry.coeffs {
            s += 1;
        }
        let prec = 2 * s + ctx.guard();
        let n_max = p.pow(s);
        let f = ctx.sequence(&f_id, p, prec, n_max)?;
        let g = ctx.sequence(&g_id, p, prec, n_max)?;
        let at = |q: &CoeffSeq, n: u64| q.padic(n, p, prec as i64);
        let pp = exact(p as i64, p, prec);
        let ordinary = a.rem_euclid(p as i64) != 0;
        let (r, d) = if ordinary {
            // a_f(p^s) ≡ (p/c_0)·a_f(p^{s−1}), and d = c_0.
            let c0 = pp.mul(&at(&f, n_max / p)?).div(&at(&f, n_max)?)?;
            (1u32, c0)
        } else {
            // a_g(p^s) ≡ (p/c_0)·a_f(p^{s−1}) and a_f(p^s) ≡ (p/c_1)·a_g(p^{s−1}); d = c_0·c_1.
            let c0 = pp.mul(&at(&f, n_max / p)?).div(&at(&g, n_max)?)?;
            let c1 = pp.mul(&at(&g, n_max / p)?).div(&at(&f, n_max)?)?;
            (2u32, c0.mul(&c1))
        };
        let pr = exact(p.pow(r) as i64, p, prec);
        let lhs = d.add(&pr.div(&d)?);
        let trace = p.pow(r) as i128 + 1 - count_ext(a, p, r);
        let rhs = PadicNum::from_rational(&Rational::from_integer(BigInt::from(trace)), p, prec);
        let diff = lhs.sub(&rhs);
        let agreement = diff.valuation().unwrap_or_else(|| diff.abs_precision());
        // The coefficient ratios are known modulo p^{2s} up to the valuations involved.
        let needed = s as i64;
        let detail = format!(
            "r = {r}, s = {s}, d + p^r/d = {lhs}, trace over F_{p}^{r} = {trace}, agreement to p^{agreement}, required p^{needed}"
        );
        Ok((Vec::new(), vec![fact("d + p^r/d equals the Frobenius trace", Some(p), agreement >= needed, detail, obs)]))
    })
}
