use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational, Scalar};
use crate::modforms::lift;

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Clone, PartialEq)]
pub struct Curve<K> {
    pub a1: K,
    pub a2: K,
    pub a3: K,
    pub a4: K,
    pub a6: K,
}

/// The change of variables `x = u²x' + r`, `y = u³y' + s·u²x' + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform<K> {
    pub u: K,
    pub r: K,
    pub s: K,
    pub t: K,
}

/// A class `c1·ω + c2·x·ω` in first de Rham cohomology, modulo exact forms.
#[derive(Clone, Debug, PartialEq)]
pub struct DeRhamVec<K> {
    pub c1: K,
    pub c2: K,
}

/// `y² = x³ + A·x + B`, with the transform from the model it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortCurve<K> {
    pub a: K,
    pub b: K,
    pub transform: Transform<K>,
}

/// How a family's own differentials `dx/y`, `x·dx/y` sit over the standard
/// basis `ω = dx/(2y + a1·x + a3)`, `η = x·ω` of its Weierstrass model:
/// `c1·ω_fam + c2·η_fam = (a·c1 + c·c2)·ω + (b·c2)·η`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<K> {
    pub a: K,
    pub b: K,
    pub c: K,
}

/// A named family member: Weierstrass model plus differential frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyModel<K> {
    pub name: String,
    pub curve: Curve<K>,
    pub frame: Frame<K>,
}

impl<K: Scalar> DeRhamVec<K> {
    pub fn new(c1: K, c2: K) -> Self {
        DeRhamVec { c1, c2 }
    }

    /// Scale to `c1 = 1`, or `c2 = 1` when `c1 = 0`.
    pub fn normalized(&self) -> Self {
        match self.c1.try_inv() {
            Some(inv) if !self.c1.is_zero() => DeRhamVec::new(self.c1.one_like(), self.c2.times(&inv)),
            _ => match self.c2.try_inv() {
                Some(inv) => DeRhamVec::new(self.c1.times(&inv), self.c2.one_like()),
                None => self.clone(),
            },
        }
    }

    /// Whether the two classes span the same line.
    pub fn parallel(&self, o: &Self) -> bool {
        self.c1.times(&o.c2) == self.c2.times(&o.c1)
    }
}

impl<K: Scalar> fmt::Display for DeRhamVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c1, self.c2)
    }
}

impl<K: Scalar> Transform<K> {
    pub fn identity(zero: &K) -> Self {
        Transform { u: zero.one_like(), r: zero.zero_like(), s: zero.zero_like(), t: zero.zero_like() }
    }

    /// The transform undoing this one.
    pub fn inverse(&self) -> Self {
        let ui = self.u.try_inv().expect("transform scale is a unit");
        let ui2 = ui.times(&ui);
        Transform {
            u: ui.clone(),
            r: self.r.negated().times(&ui2),
            s: self.s.negated().times(&ui),
            t: self.r.times(&self.s).minus(&self.t).times(&ui2).times(&ui),
        }
    }

    /// `self` followed by `next`: old → mid by `self`, mid → new by `next`.
    pub fn then(&self, next: &Self) -> Self {
        let u2 = self.u.times(&self.u);
        Transform {
            u: self.u.times(&next.u),
            r: self.r.plus(&u2.times(&next.r)),
            s: self.s.plus(&self.u.times(&next.s)),
            t: self.t.plus(&u2.times(&self.s).times(&next.r)).plus(&u2.times(&self.u).times(&next.t)),
        }
    }

    /// Class in old coordinates to new coordinates.
    pub fn class_forward(&self, v: &DeRhamVec<K>) -> DeRhamVec<K> {
        let ui = self.u.try_inv().expect("transform scale is a unit");
        DeRhamVec::new(v.c1.plus(&v.c2.times(&self.r)).times(&ui), v.c2.times(&self.u))
    }

    /// Class in new coordinates back to old coordinates.
    pub fn class_backward(&self, v: &DeRhamVec<K>) -> DeRhamVec<K> {
        let ui = self.u.try_inv().expect("transform scale is a unit");
        let d2 = v.c2.times(&ui);
        DeRhamVec::new(self.u.times(&v.c1).minus(&self.r.times(&d2)), d2)
    }

    /// Point in new coordinates to old coordinates.
    pub fn point_backward(&self, x: &K, y: &K) -> (K, K) {
        let u2 = self.u.times(&self.u);
        let xo = u2.times(x).plus(&self.r);
        let yo = u2.times(&self.u).times(y).plus(&self.s.times(&u2).times(x)).plus(&self.t);
        (xo, yo)
    }
}

impl<K: Scalar> Curve<K> {
    pub fn new(a1: K, a2: K, a3: K, a4: K, a6: K) -> Self {
        Curve { a1, a2, a3, a4, a6 }
    }

    /// `y² = x³ + a·x + b`.
    pub fn short(a: K, b: K) -> Self {
        let z = a.zero_like();
        Curve { a1: z.clone(), a2: z.clone(), a3: z, a4: a, a6: b }
    }

    pub fn zero_elem(&self) -> K {
        self.a1.zero_like()
    }

    pub fn coeffs(&self) -> [&K; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn map<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Curve<L> {
        Curve { a1: f(&self.a1), a2: f(&self.a2), a3: f(&self.a3), a4: f(&self.a4), a6: f(&self.a6) }
    }

    pub fn b2(&self) -> K {
        self.a1.times(&self.a1).plus(&self.a2.times_int(4))
    }
    pub fn b4(&self) -> K {
        self.a1.times(&self.a3).plus(&self.a4.times_int(2))
    }
    pub fn b6(&self) -> K {
        self.a3.times(&self.a3).plus(&self.a6.times_int(4))
    }
    pub fn b8(&self) -> K {
        let a1sq = self.a1.times(&self.a1);
        a1sq.times(&self.a6)
            .plus(&self.a2.times(&self.a6).times_int(4))
            .minus(&self.a1.times(&self.a3).times(&self.a4))
            .plus(&self.a2.times(&self.a3).times(&self.a3))
            .minus(&self.a4.times(&self.a4))
    }
    pub fn c4(&self) -> K {
        let b2 = self.b2();
        b2.times(&b2).minus(&self.b4().times_int(24))
    }
    pub fn c6(&self) -> K {
        let b2 = self.b2();
        b2.times(&b2).times(&b2).negated().plus(&b2.times(&self.b4()).times_int(36)).minus(&self.b6().times_int(216))
    }
    pub fn discriminant(&self) -> K {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        b2.times(&b2)
            .times(&b8)
            .negated()
            .minus(&b4.times(&b4).times(&b4).times_int(8))
            .minus(&b6.times(&b6).times_int(27))
            .plus(&b2.times(&b4).times(&b6).times_int(9))
    }

    pub fn j_invariant(&self) -> Result<K> {
        let c4 = self.c4();
        let inv = self.discriminant().try_inv().ok_or(Error::SingularCurve)?;
        Ok(c4.times(&c4).times(&c4).times(&inv))
    }

    /// The curve in coordinates `(x', y')` related by `tr`.
    pub fn transform(&self, tr: &Transform<K>) -> Curve<K> {
        let Transform { u, r, s, t } = tr;
        let ui = u.try_inv().expect("transform scale is a unit");
        let ui2 = ui.times(&ui);
        let ui3 = ui2.times(&ui);
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let n1 = a1.plus(&s.times_int(2));
        let n2 = a2.minus(&s.times(a1)).plus(&r.times_int(3)).minus(&s.times(s));
        let n3 = a3.plus(&r.times(a1)).plus(&t.times_int(2));
        let n4 = a4
            .minus(&s.times(a3))
            .plus(&r.times(a2).times_int(2))
            .minus(&t.plus(&r.times(s)).times(a1))
            .plus(&r.times(r).times_int(3))
            .minus(&s.times(t).times_int(2));
        let n6 = a6
            .plus(&r.times(a4))
            .plus(&r.times(r).times(a2))
            .plus(&r.times(r).times(r))
            .minus(&t.times(a3))
            .minus(&t.times(t))
            .minus(&r.times(t).times(a1));
        Curve {
            a1: n1.times(&ui),
            a2: n2.times(&ui2),
            a3: n3.times(&ui3),
            a4: n4.times(&ui2).times(&ui2),
            a6: n6.times(&ui3).times(&ui3),
        }
    }

    /// Complete the square and the cube: `x = x' − b2/12`, `y = y' − (a1·x + a3)/2`.
    pub fn to_short(&self) -> Result<ShortCurve<K>> {
        if self.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        let z = self.zero_elem();
        let half = z.from_int_like(2).try_inv().ok_or_else(|| Error::Config("2 is not invertible".into()))?;
        let twelfth = z.from_int_like(12).try_inv().ok_or_else(|| Error::Config("6 is not invertible".into()))?;
        let r = self.b2().times(&twelfth).negated();
        let s = self.a1.times(&half).negated();
        let t = self.a1.times(&r).plus(&self.a3).times(&half).negated();
        let transform = Transform { u: z.one_like(), r, s, t };
        let c = self.transform(&transform);
        debug_assert!(c.a1.is_zero() && c.a2.is_zero() && c.a3.is_zero());
        Ok(ShortCurve { a: c.a4, b: c.a6, transform })
    }

    /// Whether `(x, y)` satisfies the equation.
    pub fn contains(&self, x: &K, y: &K) -> bool {
        let lhs = y.times(y).plus(&self.a1.times(x).times(y)).plus(&self.a3.times(y));
        let rhs = x.times(x).times(x).plus(&self.a2.times(x).times(x)).plus(&self.a4.times(x)).plus(&self.a6);
        lhs == rhs
    }
}

impl<K: Scalar> fmt::Display for Curve<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}, {}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl<K: fmt::Debug> fmt::Debug for Curve<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries([&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]).finish()
    }
}

impl<K: Scalar> ShortCurve<K> {
    /// A short curve with identity transform.
    pub fn new(a: K, b: K) -> Result<Self> {
        let c = ShortCurve { transform: Transform::identity(&a), a, b };
        if c.discriminant_factor().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// `4A³ + 27B²`.
    pub fn discriminant_factor(&self) -> K {
        self.a.times(&self.a).times(&self.a).times_int(4).plus(&self.b.times(&self.b).times_int(27))
    }

    pub fn curve(&self) -> Curve<K> {
        Curve::short(self.a.clone(), self.b.clone())
    }

    pub fn j_invariant(&self) -> Result<K> {
        let a3 = self.a.times(&self.a).times(&self.a).times_int(4);
        let inv = self.discriminant_factor().try_inv().ok_or(Error::SingularCurve)?;
        Ok(a3.times_int(1728).times(&inv))
    }

    /// `x³ + A·x + B` at `x`.
    pub fn rhs(&self, x: &K) -> K {
        x.times(x).times(x).plus(&self.a.times(x)).plus(&self.b)
    }

    pub fn zero_elem(&self) -> K {
        self.a.zero_like()
    }

    pub fn map<L: Scalar>(&self, f: impl Fn(&K) -> L) -> ShortCurve<L> {
        ShortCurve {
            a: f(&self.a),
            b: f(&self.b),
            transform: Transform {
                u: f(&self.transform.u),
                r: f(&self.transform.r),
                s: f(&self.transform.s),
                t: f(&self.transform.t),
            },
        }
    }
}

impl<K: Scalar> FamilyModel<K> {
    /// A model whose own differentials are the standard ones.
    pub fn plain(name: impl Into<String>, curve: Curve<K>) -> Self {
        let z = curve.zero_elem();
        FamilyModel { name: name.into(), frame: Frame { a: z.one_like(), b: z.one_like(), c: z }, curve }
    }

    /// Family class to the standard basis of the Weierstrass model.
    pub fn to_standard(&self, v: &DeRhamVec<K>) -> DeRhamVec<K> {
        let Frame { a, b, c } = &self.frame;
        DeRhamVec::new(a.times(&v.c1).plus(&c.times(&v.c2)), b.times(&v.c2))
    }

    /// Standard class back to the family's differentials.
    pub fn from_standard(&self, v: &DeRhamVec<K>) -> DeRhamVec<K> {
        let Frame { a, b, c } = &self.frame;
        let c2 = v.c2.times(&b.try_inv().expect("frame is invertible"));
        let c1 = v.c1.minus(&c.times(&c2)).times(&a.try_inv().expect("frame is invertible"));
        DeRhamVec::new(c1, c2)
    }
}

/// `y² = 4x³ − (1+14u+u²)/12·x + (1−33u−33u²+u³)/216`, with `dx/y` and `x·dx/y`.
pub fn weierstrass_u_family<K: Scalar>(u: &K) -> Result<FamilyModel<K>> {
    let one = u.one_like();
    let u2 = u.times(u);
    let g2 = one.plus(&u.times_int(14)).plus(&u2).times(&lift(u, &rat(1, 12))?);
    let g3 = one.minus(&u.times_int(33)).minus(&u2.times_int(33)).plus(&u2.times(u)).times(&lift(u, &rat(1, 216))?);
    // y = 2Y gives Y² = x³ − g2/4·x + g3/4 and dx/y = dx/(2Y).
    let quarter = lift(u, &rat(1, 4))?;
    let z = u.zero_like();
    let curve = Curve::new(z.clone(), z.clone(), z, g2.times(&quarter).negated(), g3.times(&quarter));
    Ok(FamilyModel::plain(format!("weierstrass({u})"), curve))
}

/// `y² + (1−u²)·xy − u²·y = x³ − u²·x²`.
pub fn tate_u_family<K: Scalar>(u: &K) -> FamilyModel<K> {
    let u2 = u.times(u);
    let z = u.zero_like();
    let curve = Curve::new(u.one_like().minus(&u2), u2.negated(), u2.negated(), z.clone(), z);
    FamilyModel::plain(format!("tate({u})"), curve)
}

/// `y² + xy = x³ − 36/(j−1728)·x − 1/(j−1728)`.
pub fn j_line_family(j: &Rational) -> Result<FamilyModel<Rational>> {
    if *j == rat(0, 1) || *j == rat(1728, 1) {
        return Err(Error::SingularJ(crate::exactnum::format_rational(j)));
    }
    let inv = (j - rat(1728, 1)).recip();
    let z = rat(0, 1);
    let curve = Curve::new(rat(1, 1), z.clone(), z, rat(-36, 1) * &inv, -inv);
    Ok(FamilyModel::plain(format!("jline({})", crate::exactnum::format_rational(j)), curve))
}

/// Legendre `y² = x(1−x)(1−u·x)`, with `dx/y` and `x·dx/y`.
pub fn legendre_family<K: Scalar>(u: &K) -> Result<FamilyModel<K>> {
    let uinv = u.try_inv().ok_or_else(|| Error::PoleAtCuspParameter(u.to_string()))?;
    // X = u·x, Y = u·y gives Y² = X³ − (1+u)X² + uX, with dx/y = dX/Y = 2ω and
    // x·dx/y = (X/u)·dX/Y = (2/u)·η.
    let z = u.zero_like();
    let curve = Curve::new(z.clone(), u.one_like().plus(u).negated(), z.clone(), u.clone(), z.clone());
    let two = u.from_int_like(2);
    let frame = Frame { a: two.clone(), b: two.times(&uinv), c: z };
    Ok(FamilyModel { name: format!("legendre({u})"), curve, frame })
}
