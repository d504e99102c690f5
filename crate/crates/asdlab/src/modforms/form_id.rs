use std::any::Any;
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use super::catalog::*;
use super::lift;
use super::mero::*;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational, Scalar};
use crate::qseries::{read_cache, write_cache, QSeries};

/// Stable names for every form in the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormId {
    Theta,
    Theta2,
    Theta4,
    Theta6,
    Lambda,
    Eisenstein(u32),
    Delta,
    J,
    HauptA,
    Phi0,
    C4,
    T,
    T2,
    AperyF,
    H2,
    H2Cusp,
    Eta4Pow6,
    MeroW3F { u: Rational },
    MeroW3G { u: Rational, c1: Rational, c2: Rational },
    MeroW4F { u: Rational },
    MeroW4G { u: Rational, c1: Rational, c2: Rational },
    MeroW4H { u: Rational, c1: Rational, c2: Rational },
    MeroW5,
    Gamma2 { u: Rational },
    Gamma2Cusp { u: Rational },
    Level1 { k: u32, j: Rational },
    LambdaPoleF,
    LambdaPoleG,
}

impl FormId {
    /// Grading denominator of the expansion.
    pub fn mu(&self) -> u32 {
        match self {
            FormId::T2 | FormId::H2 | FormId::H2Cusp | FormId::Gamma2 { .. } | FormId::Gamma2Cusp { .. } => 2,
            _ => 1,
        }
    }

    /// Weight, with `0` for Hauptmoduln.
    pub fn weight(&self) -> u32 {
        match self {
            FormId::Theta => 0,
            FormId::Theta2 => 1,
            FormId::Theta4 => 2,
            FormId::Theta6 => 3,
            FormId::Lambda | FormId::J | FormId::HauptA | FormId::T | FormId::T2 => 0,
            FormId::Eisenstein(k) => *k,
            FormId::Delta => 12,
            FormId::Phi0 => 2,
            FormId::C4 => 4,
            FormId::AperyF | FormId::H2 | FormId::H2Cusp | FormId::Eta4Pow6 => 3,
            FormId::Gamma2 { .. } | FormId::Gamma2Cusp { .. } => 3,
            FormId::MeroW3F { .. } | FormId::MeroW3G { .. } | FormId::LambdaPoleF | FormId::LambdaPoleG => 3,
            FormId::MeroW4F { .. } | FormId::MeroW4G { .. } | FormId::MeroW4H { .. } => 4,
            FormId::MeroW5 => 5,
            FormId::Level1 { k, .. } => *k,
        }
    }

    /// Every parameter-free id.
    pub fn simple_ids() -> Vec<FormId> {
        let mut v = vec![FormId::Theta, FormId::Theta2, FormId::Theta4, FormId::Theta6, FormId::Lambda];
        v.extend([2, 4, 6, 8, 10, 12, 14].into_iter().map(FormId::Eisenstein));
        v.extend([
            FormId::Delta,
            FormId::J,
            FormId::HauptA,
            FormId::Phi0,
            FormId::C4,
            FormId::T,
            FormId::T2,
            FormId::AperyF,
            FormId::H2,
            FormId::H2Cusp,
            FormId::Eta4Pow6,
            FormId::MeroW5,
            FormId::LambdaPoleF,
            FormId::LambdaPoleG,
        ]);
        v
    }
}

fn ucc(u: &Rational, c1: &Rational, c2: &Rational) -> String {
    format!("u={},c1={},c2={}", format_rational(u), format_rational(c1), format_rational(c2))
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormId::Theta => write!(f, "theta"),
            FormId::Theta2 => write!(f, "theta2"),
            FormId::Theta4 => write!(f, "theta4"),
            FormId::Theta6 => write!(f, "theta6"),
            FormId::Lambda => write!(f, "lambda"),
            FormId::Eisenstein(k) => write!(f, "E{k}"),
            FormId::Delta => write!(f, "delta"),
            FormId::J => write!(f, "j"),
            FormId::HauptA => write!(f, "A"),
            FormId::Phi0 => write!(f, "phi0"),
            FormId::C4 => write!(f, "C4"),
            FormId::T => write!(f, "t"),
            FormId::T2 => write!(f, "t2"),
            FormId::AperyF => write!(f, "aperyF"),
            FormId::H2 => write!(f, "h2"),
            FormId::H2Cusp => write!(f, "h2_cusp"),
            FormId::Eta4Pow6 => write!(f, "eta4_6"),
            FormId::MeroW3F { u } => write!(f, "mero_w3_f[u={}]", format_rational(u)),
            FormId::MeroW3G { u, c1, c2 } => write!(f, "mero_w3_g[{}]", ucc(u, c1, c2)),
            FormId::MeroW4F { u } => write!(f, "mero_w4_f[u={}]", format_rational(u)),
            FormId::MeroW4G { u, c1, c2 } => write!(f, "mero_w4_g[{}]", ucc(u, c1, c2)),
            FormId::MeroW4H { u, c1, c2 } => write!(f, "mero_w4_h[{}]", ucc(u, c1, c2)),
            FormId::MeroW5 => write!(f, "mero_w5"),
            FormId::Gamma2 { u } => write!(f, "gamma2[u={}]", format_rational(u)),
            FormId::Gamma2Cusp { u } => write!(f, "gamma2_cusp[u={}]", format_rational(u)),
            FormId::Level1 { k, j } => write!(f, "level1[k={k},j={}]", format_rational(j)),
            FormId::LambdaPoleF => write!(f, "lambda_pole_f"),
            FormId::LambdaPoleG => write!(f, "lambda_pole_g"),
        }
    }
}

impl FromStr for FormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormId> {
        let s = s.trim();
        let (name, params) = match s.split_once('[') {
            Some((n, rest)) => {
                let inner = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse(format!("unterminated parameter list in {s:?}")))?;
                let mut map = HashMap::new();
                for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
                    let (k, v) = part
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("parameter {part:?} is not key=value")))?;
                    map.insert(k.trim().to_string(), v.trim().to_string());
                }
                (n, map)
            }
            None => (s, HashMap::new()),
        };
        let get = |k: &str| -> Result<Rational> {
            let v = params.get(k).ok_or_else(|| Error::Parse(format!("{name} needs parameter {k}")))?;
            parse_rational(v)
        };
        let id = match name {
            "theta" => FormId::Theta,
            "theta2" => FormId::Theta2,
            "theta4" => FormId::Theta4,
            "theta6" => FormId::Theta6,
            "lambda" => FormId::Lambda,
            "delta" => FormId::Delta,
            "j" => FormId::J,
            "A" => FormId::HauptA,
            "phi0" => FormId::Phi0,
            "C4" => FormId::C4,
            "t" => FormId::T,
            "t2" => FormId::T2,
            "aperyF" => FormId::AperyF,
            "h2" => FormId::H2,
            "h2_cusp" => FormId::H2Cusp,
            "eta4_6" => FormId::Eta4Pow6,
            "mero_w3_f" => FormId::MeroW3F { u: get("u")? },
            "mero_w3_g" => FormId::MeroW3G { u: get("u")?, c1: get("c1")?, c2: get("c2")? },
            "mero_w4_f" => FormId::MeroW4F { u: get("u")? },
            "mero_w4_g" => FormId::MeroW4G { u: get("u")?, c1: get("c1")?, c2: get("c2")? },
            "mero_w4_h" => FormId::MeroW4H { u: get("u")?, c1: get("c1")?, c2: get("c2")? },
            "mero_w5" => FormId::MeroW5,
            "gamma2" => FormId::Gamma2 { u: get("u")? },
            "gamma2_cusp" => FormId::Gamma2Cusp { u: get("u")? },
            "level1" => {
                let k = params
                    .get("k")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Parse("level1 needs an integer parameter k".into()))?;
                FormId::Level1 { k, j: get("j")? }
            }
            "lambda_pole_f" => FormId::LambdaPoleF,
            "lambda_pole_g" => FormId::LambdaPoleG,
            _ => match name.strip_prefix('E').and_then(|k| k.parse::<u32>().ok()) {
                Some(k) if k >= 2 && k % 2 == 0 => FormId::Eisenstein(k),
                _ => return Err(Error::Parse(format!("unknown form id {s:?}"))),
            },
        };
        Ok(id)
    }
}

/// Expansion of `id` over the ring of `zero`, known below index `n`.
pub fn build<S: Scalar>(id: &FormId, zero: &S, n: i64) -> Result<QSeries<S>> {
    if n < 1 {
        return Err(Error::Config("expansion length must be at least 1".into()));
    }
    let l = |q: &Rational| lift(zero, q);
    match id {
        FormId::Theta => Ok(theta(zero, n)),
        FormId::Theta2 => Ok(theta_power(zero, 2, n)),
        FormId::Theta4 => Ok(theta_power(zero, 4, n)),
        FormId::Theta6 => Ok(theta_power(zero, 6, n)),
        FormId::Lambda => Ok(lambda(zero, n)),
        FormId::Eisenstein(k) => eisenstein(zero, *k, n),
        FormId::Delta => Ok(delta(zero, n)),
        FormId::J => j_invariant(zero, n),
        FormId::HauptA => Ok(hauptmodul_a(zero, n)),
        FormId::Phi0 => Ok(phi0(zero, n)),
        FormId::C4 => c4(zero, n),
        FormId::T => Ok(t_gamma1_5(zero, n)),
        FormId::T2 => t2(zero, n),
        FormId::AperyF => Ok(if n <= 200 { apery_f_definitional(zero, n) } else { apery_f(zero, n) }),
        FormId::H2 => h2(zero, n),
        FormId::H2Cusp => h2_cusp(zero, n),
        FormId::Eta4Pow6 => Ok(eta4_6(zero, n)),
        FormId::MeroW3F { u } => mero_w3_f(zero, &l(u)?, n),
        FormId::MeroW3G { u, c1, c2 } => mero_w3_g(zero, &l(u)?, &l(c1)?, &l(c2)?, n),
        FormId::MeroW4F { u } => mero_w4_f(zero, &l(u)?, n),
        FormId::MeroW4G { u, c1, c2 } => mero_w4_g(zero, &l(u)?, &l(c1)?, &l(c2)?, n),
        FormId::MeroW4H { u, c1, c2 } => mero_w4_h(zero, &l(u)?, &l(c1)?, &l(c2)?, n),
        FormId::MeroW5 => mero_w5(zero, n),
        FormId::Gamma2 { u } => gamma2_form(zero, &l(u)?, n),
        FormId::Gamma2Cusp { u } => gamma2_cusp_form(zero, &l(u)?, n),
        FormId::Level1 { k, j } => level1_form(zero, *k, j, n),
        FormId::LambdaPoleF => Ok(lambda_pole_pair(zero, n)?.0),
        FormId::LambdaPoleG => Ok(lambda_pole_pair(zero, n)?.1),
    }
}

type Entry = Arc<dyn Any + Send + Sync>;

/// Memo table of built forms keyed by id and coefficient ring, with an
/// optional on-disk cache of rational expansions.
///
/// Construction happens outside the lock, so two threads may build the
/// same key; both results are identical and the longer one is kept.
#[derive(Default)]
pub struct FormStore {
    map: Mutex<HashMap<String, Entry>>,
    cache_dir: Option<PathBuf>,
}

impl FormStore {
    pub fn new(cache_dir: Option<PathBuf>) -> Self {
        FormStore { map: Mutex::new(HashMap::new()), cache_dir }
    }

    pub fn cache_dir(&self) -> Option<&PathBuf> {
        self.cache_dir.as_ref()
    }

    pub fn get<S: Scalar>(&self, id: &FormId, zero: &S, n: i64) -> Result<QSeries<S>> {
        let key = format!("{id}|{}", zero.ring_key());
        if let Some(hit) = self.lookup::<S>(&key, n) {
            return Ok(hit);
        }
        let built = match self.from_disk(id, zero, n) {
            Some(f) => f,
            None => {
                let f = build(id, zero, n)?;
                self.to_disk(id, &f);
                f
            }
        };
        let mut map = self.map.lock().expect("form store lock");
        let keep = match map.get(&key).and_then(|e| e.downcast_ref::<QSeries<S>>()) {
            Some(old) if old.trunc() >= built.trunc() => false,
            _ => true,
        };
        if keep {
            map.insert(key, Arc::new(built.clone()));
        }
        Ok(built.truncate(n))
    }

    fn lookup<S: Scalar>(&self, key: &str, n: i64) -> Option<QSeries<S>> {
        let map = self.map.lock().expect("form store lock");
        let f = map.get(key)?.downcast_ref::<QSeries<S>>()?;
        (f.trunc() >= n).then(|| f.truncate(n))
    }

    fn from_disk<S: Scalar>(&self, id: &FormId, zero: &S, n: i64) -> Option<QSeries<S>> {
        let dir = self.cache_dir.as_ref()?;
        let f = read_cache(dir, &id.to_string(), n)?;
        f.map(zero, |c| zero.from_rational_like(c)).ok()
    }

    fn to_disk<S: Scalar>(&self, id: &FormId, f: &QSeries<S>) {
        let Some(dir) = self.cache_dir.as_ref() else { return };
        let Some(rational) = (f as &dyn Any).downcast_ref::<QSeries<Rational>>() else { return };
        // A failed cache write only costs a recomputation later.
        let _ = write_cache(dir, &id.to_string(), rational);
    }
}
