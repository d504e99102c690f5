use asdlab::elliptic::{j_line_family, legendre_family, tate_u_family, weierstrass_u_family, Curve, FamilyModel};
use asdlab::exactnum::{parse_rational, rat, NumberField, QuadElem, Rational};

/// `a + b·√d`, with `d = None` when `b = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub a: Rational,
    pub b: Rational,
    pub d: Option<i64>,
}

/// A list of values brought into one field: `Q` or a single `Q(√d)`.
pub enum Values {
    Rational(Vec<Rational>),
    Quadratic(Vec<QuadElem>),
}

/// Parse `17-12*sqrt(2)`, `17-12√2`, `2i`, `-1/8` and the like.
pub fn parse_value(s: &str) -> Result<Value, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty value".into());
    }
    let mut v = Value { a: rat(0, 1), b: rat(0, 1), d: None };
    for term in split_terms(&s) {
        let (coef, d) = parse_term(&term).map_err(|e| format!("{s:?}: {e}"))?;
        match d {
            None => v.a += coef,
            Some(d) => {
                if v.d.is_some_and(|old| old != d) {
                    return Err(format!("{s:?} mixes two radicands"));
                }
                v.d = Some(d);
                v.b += coef;
            }
        }
    }
    if v.b == rat(0, 1) {
        v.d = None;
    }
    Ok(v)
}

/// Split at top-level signs, keeping each sign with its term.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for c in s.chars() {
        let after_operator = matches!(prev, None | Some('(') | Some('/') | Some('*'));
        if (c == '+' || c == '-') && depth == 0 && !after_operator {
            out.push(std::mem::take(&mut cur));
        }
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        cur.push(c);
        prev = Some(c);
    }
    out.push(cur);
    out
}

fn parse_coef(s: &str) -> Result<Rational, String> {
    let s = s.strip_prefix('+').unwrap_or(s);
    let s = s.strip_suffix('*').unwrap_or(s);
    match s {
        "" => Ok(rat(1, 1)),
        "-" => Ok(rat(-1, 1)),
        _ => parse_rational(s).map_err(|e| e.to_string()),
    }
}

fn parse_radicand(s: &str) -> Result<i64, String> {
    s.parse::<i64>().map_err(|_| format!("bad radicand {s:?}"))
}

fn parse_term(t: &str) -> Result<(Rational, Option<i64>), String> {
    if let Some(pos) = t.find("sqrt(") {
        let inner = t[pos + 5..].strip_suffix(')').ok_or("unclosed sqrt(")?;
        return Ok((parse_coef(&t[..pos])?, Some(parse_radicand(inner)?)));
    }
    if let Some(pos) = t.find('√') {
        return Ok((parse_coef(&t[..pos])?, Some(parse_radicand(&t[pos + '√'.len_utf8()..])?)));
    }
    if let Some(c) = t.strip_suffix('i') {
        return Ok((parse_coef(c)?, Some(-1)));
    }
    Ok((parse_coef(t)?, None))
}

impl Value {
    pub fn to_quad(&self, d: i64) -> Result<QuadElem, String> {
        QuadElem::rational(self.a.clone(), self.b.clone(), d).map_err(|e| e.to_string())
    }

    /// An element of an imaginary or real quadratic field (for `π`).
    pub fn to_quad_own(&self) -> Result<QuadElem, String> {
        let d = self.d.ok_or("expected an irrational quadratic number")?;
        self.to_quad(d)
    }
}

pub fn unify(values: &[Value]) -> Result<Values, String> {
    let mut ds: Vec<i64> = values.iter().filter_map(|v| v.d).collect();
    ds.dedup();
    match ds.as_slice() {
        [] => Ok(Values::Rational(values.iter().map(|v| v.a.clone()).collect())),
        [d] => Ok(Values::Quadratic(values.iter().map(|v| v.to_quad(*d)).collect::<Result<_, _>>()?)),
        _ => Err("values lie in different quadratic fields".into()),
    }
}

/// `kind:params`, e.g. `weierstrass:2`, `legendre:17-12*sqrt(2)`,
/// `jline:-3375`, `short:-1,0` or `ainv:0,0,1,-1,0`.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub kind: String,
    pub params: Vec<Value>,
}

pub const CURVE_KINDS: &str = "weierstrass:u, tate:u, legendre:u, jline:j, short:a,b, ainv:a1,a2,a3,a4,a6";

pub fn parse_curve(s: &str) -> Result<CurveSpec, String> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| format!("curve {s:?} is not kind:params ({CURVE_KINDS})"))?;
    let params = rest.split(',').map(parse_value).collect::<Result<Vec<_>, _>>()?;
    let want = match kind {
        "weierstrass" | "tate" | "legendre" | "jline" => 1,
        "short" => 2,
        "ainv" => 5,
        _ => return Err(format!("unknown curve kind {kind:?} ({CURVE_KINDS})")),
    };
    if params.len() != want {
        return Err(format!("curve kind {kind} takes {want} parameter(s), got {}", params.len()));
    }
    Ok(CurveSpec { kind: kind.to_string(), params })
}

impl CurveSpec {
    pub fn family<F: NumberField>(&self, params: &[F]) -> asdlab::Result<FamilyModel<F>> {
        let p = params;
        match self.kind.as_str() {
            "weierstrass" => weierstrass_u_family(&p[0]),
            "tate" => Ok(tate_u_family(&p[0])),
            "legendre" => legendre_family(&p[0]),
            "short" => {
                let z = p[0].zero_like();
                Ok(FamilyModel::plain("short", Curve::new(z.clone(), z.clone(), z, p[0].clone(), p[1].clone())))
            }
            "ainv" => Ok(FamilyModel::plain(
                "ainv",
                Curve::new(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), p[4].clone()),
            )),
            _ => unreachable!("curve kind validated at parse time"),
        }
    }

    /// The curve over `Q`; usage error when a parameter is irrational.
    pub fn rational_family(&self) -> Result<asdlab::Result<FamilyModel<Rational>>, String> {
        match unify(&self.params)? {
            Values::Rational(v) if self.kind == "jline" => Ok(j_line_family(&v[0])),
            Values::Rational(v) => Ok(self.family(&v)),
            Values::Quadratic(_) => Err("this command needs a curve over Q".into()),
        }
    }
}
