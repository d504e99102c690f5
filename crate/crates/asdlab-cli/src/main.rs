mod parse;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use asdlab::asdcheck::{run_scenario, scenario_names, CongruenceReport, Overrides};
use asdlab::elliptic::{cm_eigenbasis, count_ext, j_line_family, ramanujan_pi, reduce_and_count, CmEigenbasis};
use asdlab::exactnum::{format_rational, parse_rational, rat, unit_root, NumberField};
use asdlab::modforms::{verify_identity, FormId, FormStore, Identity};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use parse::{parse_curve, parse_value, unify, CurveSpec, Value, Values};

#[derive(Parser, Debug)]
#[command(name = "asdlab", version, about = "Exact modular forms, elliptic curves and ASD congruence checks")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached rational coefficient files.
    #[arg(long, global = true, env = "ASDLAB_CACHE", value_name = "DIR")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of a form, indices lo..=n in steps of q^(1/mu).
    Expand {
        form: String,
        #[arg(long, default_value_t = 20)]
        n: i64,
    },
    /// a_p and point counts over F_p and F_{p^r}.
    Count {
        /// Curve as kind:params, e.g. weierstrass:2 or ainv:0,0,1,-1,0.
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// The unit root of T^2 - a_p T + p modulo p^precision.
    Unitroot {
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        precision: u32,
    },
    /// Eigenvectors of complex multiplication by pi on de Rham cohomology.
    Eigenbasis {
        curve: String,
        /// Quadratic number generating the endomorphism, e.g. 2i or 1+sqrt(-7).
        #[arg(long, allow_hyphen_values = true)]
        pi: String,
    },
    /// Verify the derivative and Eisenstein identities below index upto.
    Identities {
        #[arg(long, default_value_t = 200)]
        upto: i64,
    },
    /// Run a registered scenario, or all of them.
    Scenario(ScenarioArgs),
    /// Partial sum of the 1/pi series attached to (u, c1, c2).
    Picheck {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        c1: String,
        #[arg(allow_hyphen_values = true)]
        c2: String,
        /// Number of terms K.
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// Scenario name, or "all".
    name: String,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<u64>>,
    #[arg(long)]
    mmax: Option<u64>,
    #[arg(long)]
    smax: Option<u32>,
    /// Coefficient count N.
    #[arg(long)]
    coeffs: Option<u64>,
    /// Guard digits G added to every modulus.
    #[arg(long)]
    precision: Option<u32>,
    /// Run primes outside the hypotheses in observation mode.
    #[arg(long)]
    observe: bool,
    /// Multiply every sequence by this rational before checking.
    #[arg(long, allow_hyphen_values = true)]
    scale: Option<String>,
    /// Bound for the auxiliary exact checks.
    #[arg(long)]
    bound: Option<u64>,
}

enum Failure {
    Usage(String),
    Compute(asdlab::Error),
    /// Output was produced but an asserted check failed.
    Checks,
}

impl From<asdlab::Error> for Failure {
    fn from(e: asdlab::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage(e: impl Into<String>) -> Failure {
    Failure::Usage(e.into())
}

fn error_kind(e: &asdlab::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn error_json(e: &asdlab::Error) -> serde_json::Value {
    json!({ "error": { "kind": error_kind(e), "message": e.to_string() } })
}

fn emit(json: bool, value: serde_json::Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json value serializes"));
    } else {
        print!("{text}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            if json {
                eprintln!("{}", error_json(&e));
            } else {
                eprintln!("error [{}]: {e}", error_kind(&e));
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let store = FormStore::new(cli.cache.clone());
    let json = cli.json;
    match cli.command {
        Command::Expand { form, n } => cmd_expand(&store, &form, n, json),
        Command::Count { curve, p, r } => cmd_count(&curve, p, r, json),
        Command::Unitroot { curve, p, precision } => cmd_unitroot(&curve, p, precision, json),
        Command::Eigenbasis { curve, pi } => cmd_eigenbasis(&curve, &pi, json),
        Command::Identities { upto } => cmd_identities(upto, json),
        Command::Scenario(args) => cmd_scenario(&store, &args, json),
        Command::Picheck { u, c1, c2, terms } => cmd_picheck(&u, &c1, &c2, terms, json),
    }
}

fn cmd_expand(store: &FormStore, form: &str, n: i64, json: bool) -> Result<(), Failure> {
    let id = FormId::from_str(form).map_err(|e| usage(e.to_string()))?;
    if n < 0 {
        return Err(usage("--n must be non-negative"));
    }
    let f = store.get(&id, &rat(0, 1), n + 1)?;
    let coeffs: Vec<String> =
        (f.lo().min(0)..=n).map(|i| f.coeff_index(i).map(|c| format_rational(&c))).collect::<asdlab::Result<_>>()?;
    let value =
        json!({ "form_id": id.to_string(), "mu": f.mu(), "lo": f.lo().min(0), "trunc": n + 1, "coeffs": coeffs });
    emit(json, value, format!("{}\n", coeffs.join(",")));
    Ok(())
}

fn rational_curve(spec: &str) -> Result<asdlab::elliptic::Curve<asdlab::exactnum::Rational>, Failure> {
    let spec = parse_curve(spec).map_err(usage)?;
    Ok(spec.rational_family().map_err(usage)??.curve)
}

fn cmd_count(curve: &str, p: u64, r: u32, json: bool) -> Result<(), Failure> {
    let c = rational_curve(curve)?;
    if r == 0 {
        return Err(usage("--r must be positive"));
    }
    let (a_p, n_p) = reduce_and_count(&c, p)?;
    let n_q = count_ext(a_p, p, r);
    let value = json!({ "p": p, "r": r, "a_p": a_p, "count_p": n_p, "count_q": n_q.to_string() });
    emit(json, value, format!("p={p} a_p={a_p} #E(F_p)={n_p} #E(F_{p}^{r})={n_q}\n"));
    Ok(())
}

fn cmd_unitroot(curve: &str, p: u64, precision: u32, json: bool) -> Result<(), Failure> {
    let c = rational_curve(curve)?;
    if precision == 0 {
        return Err(usage("--precision must be positive"));
    }
    let (a_p, _) = reduce_and_count(&c, p)?;
    let mu = unit_root(a_p, p, precision)?;
    let residue = mu.residue(precision).map(|r| r.to_string()).unwrap_or_default();
    let value = json!({ "p": p, "a_p": a_p, "precision": precision, "unit_root": residue });
    emit(json, value, format!("p={p} a_p={a_p} unit_root={residue} (mod {p}^{precision})\n"));
    Ok(())
}

fn eigenbasis_over<F: NumberField>(
    spec: &CurveSpec,
    params: &[F],
    pi: &asdlab::exactnum::QuadElem,
) -> asdlab::Result<CmEigenbasis<F>> {
    cm_eigenbasis(&spec.family(params)?, pi)
}

fn render_eigenbasis<F: NumberField>(r: &CmEigenbasis<F>, json: bool) {
    let value = json!({
        "holomorphic": [r.holomorphic.c1.to_string(), r.holomorphic.c2.to_string()],
        "other": [r.other.c1.to_string(), r.other.c2.to_string()],
        "ell": r.ell,
        "kernel": r.kernel.to_string(),
    });
    let text = format!(
        "holomorphic (c1, c2) = {}\nother (c1, c2) = {}\nendomorphism degree {}\nkernel {}\n",
        r.holomorphic, r.other, r.ell, r.kernel
    );
    emit(json, value, text);
}

fn cmd_eigenbasis(curve: &str, pi: &str, json: bool) -> Result<(), Failure> {
    let spec = parse_curve(curve).map_err(usage)?;
    let pi = parse_value(pi).and_then(|v| v.to_quad_own()).map_err(usage)?;
    match unify(&spec.params).map_err(usage)? {
        Values::Rational(v) if spec.kind == "jline" => {
            render_eigenbasis(&cm_eigenbasis(&j_line_family(&v[0])?, &pi)?, json)
        }
        Values::Rational(v) => render_eigenbasis(&eigenbasis_over(&spec, &v, &pi)?, json),
        Values::Quadratic(_) if spec.kind == "jline" => return Err(usage("jline needs a rational j")),
        Values::Quadratic(v) => render_eigenbasis(&eigenbasis_over(&spec, &v, &pi)?, json),
    }
    Ok(())
}

fn cmd_identities(upto: i64, json: bool) -> Result<(), Failure> {
    if upto < 1 {
        return Err(usage("--upto must be positive"));
    }
    let mut rows = Vec::new();
    for id in Identity::ALL {
        rows.push((id, verify_identity(id, upto)?));
    }
    let passed = rows.iter().filter(|(_, ok)| *ok).count();
    let mut text = String::new();
    for (id, ok) in &rows {
        text.push_str(&format!("{id}: {}\n", if *ok { "pass" } else { "FAIL" }));
    }
    text.push_str(&format!("{passed}/{} pass\n", rows.len()));
    let value = json!({
        "upto": upto,
        "identities": rows.iter().map(|(id, ok)| json!({ "name": id.name(), "pass": ok })).collect::<Vec<_>>(),
        "passed": passed,
        "total": rows.len(),
    });
    emit(json, value, text);
    if passed == rows.len() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn overrides(args: &ScenarioArgs) -> Result<Overrides, Failure> {
    if let Some(ps) = &args.p {
        if let Some(bad) = ps.iter().find(|&&p| !asdlab::exactnum::fp::is_prime(p)) {
            return Err(usage(format!("--p: {bad} is not prime")));
        }
    }
    if args.mmax == Some(0) || args.smax == Some(0) {
        return Err(usage("--mmax and --smax must be positive"));
    }
    if args.coeffs.is_some_and(|n| n < 2) {
        return Err(usage("--coeffs must be at least 2"));
    }
    let scale = match &args.scale {
        Some(s) => Some(parse_rational(s).map_err(|e| usage(format!("--scale: {e}")))?),
        None => None,
    };
    Ok(Overrides {
        primes: args.p.clone(),
        m_max: args.mmax,
        s_max: args.smax,
        coeffs: args.coeffs,
        guard: args.precision,
        observe: args.observe,
        scale,
        bound: args.bound,
    })
}

fn cmd_scenario(store: &FormStore, args: &ScenarioArgs, json: bool) -> Result<(), Failure> {
    let names = scenario_names();
    let selected: Vec<String> = if args.name == "all" {
        names
    } else if names.contains(&args.name) {
        vec![args.name.clone()]
    } else {
        return Err(usage(format!("unknown scenario {:?}; known: all, {}", args.name, names.join(", "))));
    };
    let ov = overrides(args)?;
    // Scenarios run one after another; each fans out over its primes.
    let results: Vec<(String, asdlab::Result<CongruenceReport>)> =
        selected.iter().map(|n| (n.clone(), run_scenario(n, &ov, store))).collect();
    let all_ok = results.iter().all(|(_, r)| r.as_ref().is_ok_and(|r| r.ok()));
    if json {
        let items: Vec<serde_json::Value> = results
            .iter()
            .map(|(name, r)| match r {
                Ok(rep) => serde_json::to_value(rep).expect("report serializes"),
                Err(e) => {
                    let mut v = error_json(e);
                    v["scenario"] = json!(name);
                    v
                }
            })
            .collect();
        let value = if args.name == "all" { json!(items) } else { items.into_iter().next().expect("one scenario") };
        println!("{}", serde_json::to_string_pretty(&value).expect("json value serializes"));
    } else {
        for (i, (name, r)) in results.iter().enumerate() {
            if i > 0 {
                println!();
            }
            match r {
                Ok(rep) => print!("{}", rep.to_table()),
                Err(e) => println!("scenario {name}\nerror [{}]: {e}", error_kind(e)),
            }
        }
    }
    // Errors are rendered inline with the reports, so the exit code is all that is left.
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_picheck(u: &str, c1: &str, c2: &str, terms: usize, json: bool) -> Result<(), Failure> {
    let vals: Vec<Value> = [u, c1, c2].iter().map(|s| parse_value(s)).collect::<Result<_, _>>().map_err(usage)?;
    let (a, lambda, sum) = match unify(&vals).map_err(usage)? {
        Values::Rational(v) => {
            let r = ramanujan_pi(&v[0], &v[1], &v[2], terms)?;
            (format_rational(&r.a), format_rational(&r.lambda), r.partial_sum)
        }
        Values::Quadratic(v) => {
            let r = ramanujan_pi(&v[0], &v[1], &v[2], terms)?;
            (r.a.to_string(), r.lambda.to_string(), r.partial_sum)
        }
    };
    let value = json!({ "a": a, "lambda": lambda, "terms": terms, "partial_sum": sum, "pi_times_sum": sum * std::f64::consts::PI });
    let text = format!(
        "a = {a}\nlambda = {lambda}\nsum_(k<={terms}) (1+a k)((1/2)_k^3/k!^3) lambda^k = {sum:.17}\npi * sum = {:.17}\n",
        sum * std::f64::consts::PI
    );
    emit(json, value, text);
    Ok(())
}
