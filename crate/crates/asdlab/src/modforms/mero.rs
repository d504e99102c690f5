use super::catalog::{apery_f, eisenstein, finish, j_invariant, lambda, t2, theta_power};
use super::lift;
use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational, Scalar};
use crate::qseries::QSeries;

fn check_pole<S: Scalar>(u: &S) -> Result<()> {
    if u.is_zero() || u.minus(&u.one_like()).is_zero() {
        return Err(Error::PoleAtCuspParameter(u.to_string()));
    }
    Ok(())
}

/// `θ^{2w}·qdλ/dq` and `1/(λ − u)`, the shared pieces of the weight 3 and 4 forms.
fn pieces<S: Scalar>(zero: &S, w: u32, u: &S, n: i64) -> Result<(QSeries<S>, QSeries<S>)> {
    check_pole(u)?;
    let lam = lambda(zero, n);
    let base = theta_power(zero, 2 * w, n).times(&lam.theta_deriv());
    let inv = lam.add_const(&u.negated()).invert()?;
    Ok((base, inv))
}

/// Weight 3: `f = θ²·θλ/(λ − u)`.
pub fn mero_w3_f<S: Scalar>(zero: &S, u: &S, n: i64) -> Result<QSeries<S>> {
    let (base, inv) = pieces(zero, 1, u, n)?;
    finish(base.times(&inv), n)
}

/// Weight 3: `g = (c₂u(1−u)/(λ−u)² + (c₁ − c₂(5u−1)/12)/(λ−u))·θ²·θλ`.
pub fn mero_w3_g<S: Scalar>(zero: &S, u: &S, c1: &S, c2: &S, n: i64) -> Result<QSeries<S>> {
    let (base, inv) = pieces(zero, 1, u, n)?;
    let one = zero.one_like();
    let a2 = c2.times(u).times(&one.minus(u));
    let a1 = c1.minus(&c2.times(&u.times_int(5).minus(&one)).times(&lift(zero, &rat(1, 12))?));
    let mult = inv.pow(2).scale(&a2).plus(&inv.scale(&a1));
    finish(mult.times(&base), n)
}

/// Weight 4: `f = θ⁴·θλ/(λ − u)`.
pub fn mero_w4_f<S: Scalar>(zero: &S, u: &S, n: i64) -> Result<QSeries<S>> {
    let (base, inv) = pieces(zero, 2, u, n)?;
    finish(base.times(&inv), n)
}

/// Weight 4: `g = (c₂u(1−u)/(2(λ−u)²) + (c₁ − c₂(5u−1)/12)/(λ−u))·θ⁴·θλ`.
pub fn mero_w4_g<S: Scalar>(zero: &S, u: &S, c1: &S, c2: &S, n: i64) -> Result<QSeries<S>> {
    let (base, inv) = pieces(zero, 2, u, n)?;
    let one = zero.one_like();
    let a2 = c2.times(u).times(&one.minus(u)).times(&lift(zero, &rat(1, 2))?);
    let a1 = c1.minus(&c2.times(&u.times_int(5).minus(&one)).times(&lift(zero, &rat(1, 12))?));
    let mult = inv.pow(2).scale(&a2).plus(&inv.scale(&a1));
    finish(mult.times(&base), n)
}

/// `P(u) = (61u² − 46u + 1)/144`.
pub fn poly_p<S: Scalar>(u: &S) -> Result<S> {
    let v = u.times(u).times_int(61).minus(&u.times_int(46)).plus(&u.one_like());
    Ok(v.times(&lift(u, &rat(1, 144))?))
}

/// `Q(u) = −u(1 − u)(17u − 7)/12`.
pub fn poly_q<S: Scalar>(u: &S) -> Result<S> {
    let one = u.one_like();
    let v = u.times(&one.minus(u)).times(&u.times_int(17).minus(&u.from_int_like(7)));
    Ok(v.times(&lift(u, &rat(-1, 12))?))
}

/// Weight 4: the third-order form
/// `h = (c₂²u²(1−u)²/(λ−u)³ + (c₂²Q + c₁c₂u(1−u))/(λ−u)² + (c₂²P + c₁² − (5u−1)c₁c₂/6)/(λ−u))·θ⁴·θλ`.
pub fn mero_w4_h<S: Scalar>(zero: &S, u: &S, c1: &S, c2: &S, n: i64) -> Result<QSeries<S>> {
    let (base, inv) = pieces(zero, 2, u, n)?;
    let one = zero.one_like();
    let uu = u.times(&one.minus(u));
    let c2sq = c2.times(c2);
    let a3 = c2sq.times(&uu).times(&uu);
    let a2 = c2sq.times(&poly_q(u)?).plus(&c1.times(c2).times(&uu));
    let a1 = c2sq
        .times(&poly_p(u)?)
        .plus(&c1.times(c1))
        .minus(&u.times_int(5).minus(&one).times(c1).times(c2).times(&lift(zero, &rat(1, 6))?));
    let inv2 = inv.pow(2);
    let inv3 = inv2.times(&inv);
    let mult = inv3.scale(&a3).plus(&inv2.scale(&a2)).plus(&inv.scale(&a1));
    finish(mult.times(&base), n)
}

/// Weight 5: `f = θ⁶·θλ/(1 − 2λ)`.
pub fn mero_w5<S: Scalar>(zero: &S, n: i64) -> Result<QSeries<S>> {
    let lam = lambda(zero, n);
    let base = theta_power(zero, 6, n).times(&lam.theta_deriv());
    let den = lam.scale_int(-2).add_const(&zero.one_like());
    finish(base.times(&den.invert()?), n)
}

/// `t₂F/(t₂ − u) = Σ b(n) q^{n/2}`.
pub fn gamma2_form<S: Scalar>(zero: &S, u: &S, n: i64) -> Result<QSeries<S>> {
    if u.is_zero() {
        return Err(Error::PoleAtCuspParameter(u.to_string()));
    }
    let t = t2(zero, n + 2)?;
    let f = apery_f(zero, n / 2 + 3);
    let inv = t.add_const(&u.negated()).invert()?;
    finish(f.times(&t).times(&inv), n)
}

/// `F/(t_2 − u)`, the printed `t_2·F/(t_2 − u)` divided by `t = t_2²`; this
/// is the normalization for which the five-term relation holds.
pub fn gamma2_cusp_form<S: Scalar>(zero: &S, u: &S, n: i64) -> Result<QSeries<S>> {
    if u.is_zero() {
        return Err(Error::PoleAtCuspParameter(u.to_string()));
    }
    let t = t2(zero, n + 2)?;
    let f = apery_f(zero, n / 2 + 3);
    let inv = t.add_const(&u.negated()).invert()?;
    finish(f.times(&inv), n)
}

/// The rational avatar `E_k/(j − j₀)` of the level one form with a pole at `j = j₀`.
pub fn level1_form<S: Scalar>(zero: &S, k: u32, jval: &Rational, n: i64) -> Result<QSeries<S>> {
    if !matches!(k, 4 | 6 | 8 | 10 | 14) {
        return Err(Error::Config(format!("weight {k} is not one of 4, 6, 8, 10, 14")));
    }
    if *jval == rat(0, 1) || *jval == rat(1728, 1) {
        return Err(Error::SingularJ(crate::exactnum::format_rational(jval)));
    }
    let j0 = lift(zero, jval)?;
    let den = j_invariant(zero, n)?.add_const(&j0.negated());
    let ek = eisenstein(zero, k, n)?;
    finish(ek.times(&den.invert()?), n)
}

/// The pair `f = θ²·θλ/(λ − 2)` and `g = f·(λ + 2)/(λ − 2)`.
pub fn lambda_pole_pair<S: Scalar>(zero: &S, n: i64) -> Result<(QSeries<S>, QSeries<S>)> {
    let two = zero.from_int_like(2);
    let f = mero_w3_f(zero, &two, n)?;
    let lam = lambda(zero, n);
    let ratio = lam.add_const(&two).times(&lam.add_const(&two.negated()).invert()?);
    let g = finish(f.times(&ratio), n)?;
    Ok((f, g))
}
