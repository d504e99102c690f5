use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// Parameters echoed into a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub u: Vec<String>,
    pub p: Vec<u64>,
    pub r: u32,
    pub k: Vec<u32>,
    #[serde(rename = "N")]
    pub n: u64,
}

/// One evaluated congruence at `(p, m, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub relation: String,
    pub p: u64,
    pub m: u64,
    pub s: u32,
    pub required: i64,
    pub achieved: i64,
    pub pass: bool,
    #[serde(default)]
    pub observation: bool,
}

/// A yes/no statement checked alongside the congruences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactRecord {
    pub name: String,
    pub p: Option<u64>,
    pub pass: bool,
    pub detail: String,
    #[serde(default)]
    pub observation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub p: u64,
    pub reason: String,
}

/// Counts of asserted passes and failures, skipped primes, and
/// observation-mode outcomes (which never count as failures).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub skip: u64,
    #[serde(default)]
    pub observed_pass: u64,
    #[serde(default)]
    pub observed_fail: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub scenario: String,
    pub params: ReportParams,
    pub checks: Vec<CheckRecord>,
    #[serde(default)]
    pub facts: Vec<FactRecord>,
    pub skipped: Vec<SkipRecord>,
    pub summary: Summary,
}

impl CongruenceReport {
    pub fn new(scenario: impl Into<String>, params: ReportParams) -> Self {
        CongruenceReport { scenario: scenario.into(), params, ..Default::default() }
    }

    /// Recompute the summary from the records.
    pub fn finalize(mut self) -> Self {
        let mut s = Summary { skip: self.skipped.len() as u64, ..Default::default() };
        let outcomes = self.checks.iter().map(|c| (c.pass, c.observation));
        for (pass, obs) in outcomes.chain(self.facts.iter().map(|f| (f.pass, f.observation))) {
            match (pass, obs) {
                (true, false) => s.pass += 1,
                (false, false) => s.fail += 1,
                (true, true) => s.observed_pass += 1,
                (false, true) => s.observed_fail += 1,
            }
        }
        self.summary = s;
        self
    }

    /// Append the records of `other`.
    pub fn absorb(&mut self, other: CongruenceReport) {
        self.checks.extend(other.checks);
        self.facts.extend(other.facts);
        self.skipped.extend(other.skipped);
    }

    /// No asserted check or fact failed.
    pub fn ok(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering with the same content as the JSON form.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let p = &self.params;
        let _ = writeln!(out, "scenario {}", self.scenario);
        let _ = writeln!(out, "params u={:?} p={:?} r={} k={:?} N={}", p.u, p.p, p.r, p.k, p.n);
        let _ = writeln!(
            out,
            "{:<28} {:>5} {:>6} {:>3} {:>9} {:>9}  verdict",
            "relation", "p", "m", "s", "required", "achieved"
        );
        for c in &self.checks {
            let verdict = match (c.pass, c.observation) {
                (true, false) => "PASS",
                (false, false) => "FAIL",
                (true, true) => "pass (observed)",
                (false, true) => "fail (observed)",
            };
            let _ = writeln!(
                out,
                "{:<28} {:>5} {:>6} {:>3} {:>9} {:>9}  {}",
                c.relation, c.p, c.m, c.s, c.required, c.achieved, verdict
            );
        }
        for f in &self.facts {
            let tag = if f.observation { " (observed)" } else { "" };
            let verdict = if f.pass { "PASS" } else { "FAIL" };
            let p = f.p.map(|p| format!(" p={p}")).unwrap_or_default();
            let _ = writeln!(out, "fact {}{p}: {verdict}{tag} {}", f.name, f.detail);
        }
        for s in &self.skipped {
            let _ = writeln!(out, "skipped p={}: {}", s.p, s.reason);
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary pass={} fail={} skip={} observed_pass={} observed_fail={}",
            s.pass, s.fail, s.skip, s.observed_pass, s.observed_fail
        );
        out
    }
}
