//! The acceptance criteria, one PASS/FAIL line each. Criteria that are known
//! not to hold as stated are listed in `EXPECTED_FAIL`; any other failure, or
//! an expected failure that starts passing, makes the target exit non-zero.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use asdlab::asdcheck::*;
use asdlab::elliptic::*;
use asdlab::exactnum::*;
use asdlab::modforms::{verify_identity, FormStore, Identity};

/// Wall-clock budget for the weight-three unit-root runs.
const RUNTIME_BUDGET: Duration = Duration::from_secs(60);
/// Distance allowed between the 1/π partial sum and 2√2/π.
const PI_TOLERANCE: f64 = 1e-12;
/// Working precision for that sum.
const PI_BITS: usize = 256;
/// Coefficients compared in the identity suite.
const IDENTITY_TERMS: i64 = 200;

/// Fails because the weight-three Γ₂ five-term relation at p = 11 (bad
/// reduction) misses its modulus at s = 3.
const EXPECTED_FAIL: [&str; 1] = ["gamma2-relations"];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }

    fn all(parts: Vec<Outcome>) -> Self {
        let pass = parts.iter().all(|o| o.pass);
        let detail = parts.iter().map(|o| o.detail.as_str()).collect::<Vec<_>>().join("; ");
        Outcome { pass, detail }
    }
}

fn run(store: &FormStore, name: &str) -> Result<CongruenceReport, String> {
    run_scenario(name, &Overrides::default(), store).map_err(|e| format!("{name}: {e}"))
}

/// Every record of `relation` passes at exactly the stated exponent and
/// every prime in `primes` is covered with `s` up to `s_max`.
fn relation_holds(
    rep: &CongruenceReport,
    relation: &str,
    primes: &[u64],
    s_max: u32,
    exponent: impl Fn(u32) -> i64,
) -> Outcome {
    let recs: Vec<&CheckRecord> = rep.checks.iter().filter(|c| c.relation == relation).collect();
    let mut problems = Vec::new();
    for &p in primes {
        let at_p: Vec<_> = recs.iter().filter(|c| c.p == p).collect();
        if at_p.is_empty() {
            problems.push(format!("p={p} not checked"));
            continue;
        }
        let top = at_p.iter().map(|c| c.s).max().unwrap_or(0);
        let cap = (1..=s_max).rev().find(|&s| p.pow(s) <= rep.params.n).unwrap_or(1);
        if top < cap {
            problems.push(format!("p={p} only reaches s={top}"));
        }
        for c in at_p {
            if c.required != exponent(c.s) {
                problems.push(format!("p={p} s={} modulus exponent {} not {}", c.s, c.required, exponent(c.s)));
            } else if !c.pass {
                problems.push(format!("p={p} m={} s={} achieved {} < {}", c.m, c.s, c.achieved, c.required));
            }
        }
    }
    let passed = recs.iter().filter(|c| primes.contains(&c.p) && c.pass).count();
    let total = recs.iter().filter(|c| primes.contains(&c.p)).count();
    let mut detail = format!("{relation}: {passed}/{total}");
    if !problems.is_empty() {
        problems.truncate(3);
        detail.push_str(&format!(" [{}]", problems.join(", ")));
    }
    Outcome::new(problems.is_empty(), detail)
}

fn params_are(rep: &CongruenceReport, n: u64, m_max: u64) -> Outcome {
    let top_m = rep.checks.iter().map(|c| c.m).max().unwrap_or(0);
    Outcome::new(rep.params.n == n && top_m == m_max, format!("{}: N={} m<={top_m}", rep.scenario, rep.params.n))
}

fn unit_root_weight_three(store: &FormStore) -> Result<Outcome, String> {
    let start = Instant::now();
    let f = run(store, "unit-root-w3-f")?;
    let g = run(store, "unit-root-w3-g")?;
    let elapsed = start.elapsed();
    Ok(Outcome::all(vec![
        params_are(&f, 1500, 20),
        relation_holds(&f, "mero_w3_f[u=2]", &[5, 13, 17], 2, |s| 2 * s as i64),
        relation_holds(&g, "mero_w3_g[u=2,c1=1,c2=4]", &[5, 13, 17], 2, |s| 2 * s as i64),
        Outcome::new(elapsed < RUNTIME_BUDGET, format!("runtime {:.1}s", elapsed.as_secs_f64())),
    ]))
}

fn unit_root_weight_four(store: &FormStore) -> Result<Outcome, String> {
    let mut parts = Vec::new();
    for (name, rel) in [
        ("unit-root-w4-f", "mero_w4_f[u=2]"),
        ("unit-root-w4-g", "mero_w4_g[u=2,c1=1,c2=4]"),
        ("unit-root-w4-h", "mero_w4_h[u=2,c1=1,c2=4]"),
    ] {
        let rep = run(store, name)?;
        parts.push(relation_holds(&rep, rel, &[5, 13], 2, |s| 3 * s as i64));
    }
    Ok(Outcome::all(parts))
}

fn lambda_pole_three_term(store: &FormStore) -> Result<Outcome, String> {
    let rep = run(store, "lambda-pole-three-term")?;
    // The scenario takes A_p(u) from counting points on the Legendre curve at u.
    let mut parts = vec![];
    for u in [2i64, 3] {
        parts.push(relation_holds(&rep, &format!("u={u} three-term"), &[5, 7, 11], 2, |s| 2 * s as i64 - 1));
    }
    Ok(Outcome::all(parts))
}

fn gamma2_relations(store: &FormStore) -> Result<Outcome, String> {
    let h2 = run(store, "gamma2-h2")?;
    let five = run(store, "gamma2-five-term")?;
    Ok(Outcome::all(vec![
        params_are(&h2, 2500, 20),
        relation_holds(&h2, "h2_cusp three-term", &[7, 11, 13], 2, |s| 2 * s as i64),
        relation_holds(&five, "gamma2_cusp[u=1] five-term", &[7, 11], 4, |s| 2 * s as i64 - 3),
    ]))
}

fn magnetic_c4(store: &FormStore) -> Result<Outcome, String> {
    let rep = run(store, "magnetic-c4")?;
    let asserted =
        CongruenceReport { checks: rep.checks.iter().filter(|c| !c.observation).cloned().collect(), ..rep.clone() };
    let observed_three = rep.checks.iter().filter(|c| c.p == 3 && c.observation).count();
    let fact = rep.facts.iter().find(|f| f.name.starts_with("c(n)/n"));
    Ok(Outcome::all(vec![
        relation_holds(&asserted, "C4 two-term", &[5, 7, 11, 13], 2, |s| 3 * s as i64),
        Outcome::new(observed_three > 0, format!("p=3 observed on {observed_three} pairs")),
        match fact {
            Some(f) => Outcome::new(f.pass && !f.observation && f.detail.contains("2000"), f.detail.clone()),
            None => Outcome::new(false, "denominator fact missing"),
        },
    ]))
}

fn level_one_cm(store: &FormStore) -> Result<Outcome, String> {
    let rep = run(store, "level-one-r0")?;
    let j_ok = cm_j_from_disc(7, 256).map(|j| j == (-3375).into()).unwrap_or(false);
    let mut parts = vec![Outcome::new(j_ok, "j at disc -7 is -3375")];
    for k in [4u32, 6] {
        parts.push(relation_holds(&rep, &format!("k={k} r=0"), &[11, 23], 2, move |s| ((k - 1) * s) as i64));
    }
    Ok(Outcome::all(parts))
}

fn lambda_two_relations(store: &FormStore) -> Result<Outcome, String> {
    let pair = run(store, "lambda-two-pair")?;
    let cross = run(store, "lambda-two-cross")?;
    let mut parts = vec![
        relation_holds(&pair, "f unit root", &[5, 13], 2, |s| 2 * s as i64),
        relation_holds(&pair, "g p/unit root", &[5, 13], 2, |s| 2 * s as i64),
    ];
    for rel in ["g from f: 4/mu", "f from g: -p mu/4"] {
        let mut by_p: BTreeMap<u64, BTreeSet<(u64, u32)>> = BTreeMap::new();
        let mut all_pass = true;
        for c in cross.checks.iter().filter(|c| c.relation == rel) {
            by_p.entry(c.p).or_default().insert((c.m, c.s));
            all_pass &= c.pass;
        }
        let mut covered = true;
        for p in [3u64, 7, 11] {
            let want: BTreeSet<(u64, u32)> = (1..=8u32)
                .flat_map(|s| (1..=500u64).filter(move |m| m % p != 0 && m * p.pow(s) <= 500).map(move |m| (m, s)))
                .collect();
            covered &= by_p.get(&p) == Some(&want);
        }
        let n: usize = by_p.values().map(|v| v.len()).sum();
        parts.push(Outcome::new(all_pass && covered, format!("{rel}: {n} pairs, all m p^s <= 500 covered: {covered}")));
    }
    Ok(Outcome::all(parts))
}

fn unit_root_weight_five(store: &FormStore) -> Result<Outcome, String> {
    let rep = run(store, "unit-root-w5")?;
    Ok(relation_holds(&rep, "mero_w5", &[5, 13], 2, |s| 4 * s as i64))
}

fn cm_eigenbasis_constants() -> Result<Outcome, String> {
    let two_i = QuadElem::rational(rat(0, 1), rat(2, 1), -1).map_err(|e| e.to_string())?;
    let fam = weierstrass_u_family(&rat(2, 1)).map_err(|e| e.to_string())?;
    let e2 = cm_eigenbasis(&fam, &two_i).map_err(|e| e.to_string())?;
    let s = QuadElem::rational(rat(0, 1), rat(1, 1), 2).map_err(|e| e.to_string())?;
    let u = s.from_int_like(17).minus(&s.times_int(12));
    let leg = cm_eigenbasis(&legendre_family(&u).map_err(|e| e.to_string())?, &two_i).map_err(|e| e.to_string())?;
    // Sign convention for the Legendre class: c2 = 2√2 − 3 (see the ledger).
    let want = DeRhamVec::new(s.one_like(), s.times_int(2).minus(&s.from_int_like(3)));
    Ok(Outcome::all(vec![
        Outcome::new(e2.other == DeRhamVec::new(rat(1, 1), rat(4, 1)), format!("weierstrass u=2: {}", e2.other)),
        Outcome::new(leg.other == want, format!("legendre u=17-12√2: {}", leg.other)),
    ]))
}

fn ramanujan_series() -> Result<Outcome, String> {
    let s = QuadElem::rational(rat(0, 1), rat(1, 1), 2).map_err(|e| e.to_string())?;
    let u = s.from_int_like(17).minus(&s.times_int(12));
    let c2 = s.times_int(2).minus(&s.from_int_like(3));
    let r = ramanujan_pi(&u, &s.one_like(), &c2, 40).map_err(|e| e.to_string())?;
    let params_ok = r.a == s.from_int_like(6) && r.lambda == s.from_rational_like(&rat(-1, 8)).unwrap();
    let err = ramanujan_pi_error(&rat(6, 1), &rat(-1, 8), 40, &rat(2, 1), 2, PI_BITS).map_err(|e| e.to_string())?;
    Ok(Outcome::new(
        params_ok && err < PI_TOLERANCE,
        format!("a = {}, lambda = {}, |sum - 2√2/π| = {err:.3e} at {PI_BITS} bits", r.a, r.lambda),
    ))
}

fn identity_suite() -> Result<Outcome, String> {
    let mut ok = 0;
    let mut bad = Vec::new();
    for id in Identity::ALL {
        match verify_identity(id, IDENTITY_TERMS) {
            Ok(true) => ok += 1,
            Ok(false) => bad.push(id.to_string()),
            Err(e) => bad.push(format!("{id}: {e}")),
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!(
            "{ok}/{} identities to {IDENTITY_TERMS} coefficients{}",
            Identity::ALL.len(),
            bad.iter().map(|b| format!(", failed {b}")).collect::<String>()
        ),
    ))
}

fn sigma3(n: u64) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| (d * d * d) as i64).sum()
}

fn property_suites(store: &FormStore) -> Result<Outcome, String> {
    let short = |a: i64, b: (i64, i64)| ShortCurve::new(rat(a, 1), rat(b.0, b.1)).map_err(|e| e.to_string());
    let curves = [
        short(-1, (0, 1))?,
        short(0, (1, 1))?,
        short(2, (3, 1))?,
        short(-7, (10, 1))?,
        ShortCurve::new(rat(-11, 16), rat(-7, 32)).map_err(|e| e.to_string())?,
    ];
    let kersum = curves.iter().all(|c| (2..=9).all(|m| torsion_xsum(c, m) == rat(0, 1)));

    let models: Vec<Curve<Rational>> = vec![
        Curve::short(rat(1, 1), rat(0, 1)),
        Curve::short(rat(2, 1), rat(3, 1)),
        Curve::new(rat(0, 1), rat(-1, 1), rat(1, 1), rat(0, 1), rat(0, 1)),
        tate_u_family(&rat(2, 1)).curve,
        legendre_family(&rat(3, 1)).map_err(|e| e.to_string())?.curve,
    ];
    let mut fq_checked = 0;
    let mut fq_ok = true;
    for c in &models {
        for p in [3u64, 5, 7, 11, 13] {
            let Ok((a_p, _)) = reduce_and_count(c, p) else { continue };
            let fq = FqField::new(p, 2).map_err(|e| e.to_string())?;
            fq_ok &= count_over_fq(c, &fq).map_err(|e| e.to_string())? as i128 == count_ext(a_p, p, 2);
            fq_checked += 1;
        }
    }

    let mut hasse_checked = 0;
    let mut hasse_ok = true;
    for p in fp::primes_between(3, 100) {
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if let Ok((ap, n)) = reduce_and_count(&Curve::short(rat(a, 1), rat(b, 1)), p) {
                    hasse_ok &= ap * ap <= 4 * p as i64 && n as i64 == p as i64 + 1 - ap;
                    hasse_checked += 1;
                }
            }
        }
    }

    let seq = CoeffSeq::exact("sigma3", 1, (0..=400u64).map(|n| rat(if n == 0 { 0 } else { sigma3(n) }, 1)).collect());
    let mut hecke_ok = true;
    for p in [3u64, 5, 7] {
        let p3 = (p * p * p) as i64;
        let terms: Vec<LinearTerm> = [1, -(1 + p3), p3]
            .iter()
            .enumerate()
            .map(|(i, &c)| LinearTerm::new(0, i as u32, PadicNum::from_int(c, p, 60)))
            .collect();
        let range = CheckRange::new(10, 2).with_limit(400);
        let recs = check_linear("hecke", &[&seq], p, &range, |s| 5 * s as i64, |_, _| Ok(terms.clone()))
            .map_err(|e| e.to_string())?;
        hecke_ok &= !recs.is_empty() && recs.iter().all(|r| r.achieved == r.required + DEFAULT_GUARD as i64);
    }

    let mut scale_ok = true;
    for name in ["unit-root-w3-f", "unit-root-w4-g", "lambda-pole-three-term"] {
        let base = Overrides { coeffs: Some(200), m_max: Some(8), s_max: Some(2), ..Default::default() };
        let scaled = Overrides { scale: Some(rat(3, 2)), ..base.clone() };
        let a = run_scenario(name, &base, store).map_err(|e| e.to_string())?;
        let b = run_scenario(name, &scaled, store).map_err(|e| e.to_string())?;
        let key =
            |r: &CongruenceReport| r.checks.iter().map(|c| (c.p, c.m, c.s, c.achieved, c.pass)).collect::<Vec<_>>();
        scale_ok &= !a.checks.is_empty() && key(&a) == key(&b);
    }

    Ok(Outcome::all(vec![
        Outcome::new(kersum, "torsion x-sums vanish for m <= 9 on 5 curves"),
        Outcome::new(fq_ok && fq_checked >= 15, format!("F_(p^2) counts agree on {fq_checked} (curve, p)")),
        Outcome::new(hasse_ok, format!("Hasse bound on {hasse_checked} reductions")),
        Outcome::new(hecke_ok, "sigma3 Hecke relation exact at p = 3, 5, 7"),
        Outcome::new(scale_ok, "verdicts unchanged by scaling 3/2 on 3 scenarios"),
    ]))
}

fn main() -> ExitCode {
    let store = FormStore::new(None);
    let criteria: Vec<(&str, Box<dyn Fn() -> Result<Outcome, String> + '_>)> = vec![
        ("unit-root-weight-three", Box::new(|| unit_root_weight_three(&store))),
        ("unit-root-weight-four", Box::new(|| unit_root_weight_four(&store))),
        ("lambda-pole-three-term", Box::new(|| lambda_pole_three_term(&store))),
        ("gamma2-relations", Box::new(|| gamma2_relations(&store))),
        ("magnetic-c4", Box::new(|| magnetic_c4(&store))),
        ("level-one-cm", Box::new(|| level_one_cm(&store))),
        ("lambda-two-relations", Box::new(|| lambda_two_relations(&store))),
        ("unit-root-weight-five", Box::new(|| unit_root_weight_five(&store))),
        ("cm-eigenbasis-constants", Box::new(cm_eigenbasis_constants)),
        ("ramanujan-series", Box::new(ramanujan_series)),
        ("identity-suite", Box::new(identity_suite)),
        ("property-suites", Box::new(|| property_suites(&store))),
    ];
    let mut unexpected = Vec::new();
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let expected_fail = EXPECTED_FAIL.contains(name);
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        let note = if expected_fail { " (expected, see ledger)" } else { "" };
        println!("acceptance {name}: {verdict}{note} [{:.1}s] {}", start.elapsed().as_secs_f64(), outcome.detail);
        if outcome.pass == expected_fail {
            unexpected.push(*name);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected verdicts: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
