use asdlab::elliptic::*;
use asdlab::exactnum::*;
use asdlab::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn short_q(a: Rational, b: Rational) -> ShortCurve<Rational> {
    ShortCurve::new(a, b).unwrap()
}

/// Five nonsingular short curves with small coefficients.
fn test_curves() -> Vec<ShortCurve<Rational>> {
    vec![
        short_q(rat(-1, 1), rat(0, 1)),
        short_q(rat(0, 1), rat(1, 1)),
        short_q(rat(-11, 16), rat(-7, 32)),
        short_q(rat(2, 1), rat(3, 1)),
        short_q(rat(-7, 1), rat(10, 1)),
    ]
}

fn sqrt2() -> QuadElem {
    QuadElem::rational(rat(0, 1), rat(1, 1), 2).unwrap()
}

fn two_i() -> QuadElem {
    QuadElem::rational(rat(0, 1), rat(2, 1), -1).unwrap()
}

fn legendre_cm_parameter() -> QuadElem {
    let s = sqrt2();
    s.from_int_like(17).minus(&s.sqrt_d().times_int(12))
}

// Independent affine arithmetic on y² = x³ + ax + b over F_p.
type P = Option<(u64, u64)>;

fn pw(b: u64, e: u64, p: u64) -> u64 {
    (0..e).fold(1u64, |acc, _| acc * b % p)
}

fn ec_add(a: u64, p: u64, s: P, t: P) -> P {
    let (Some((x1, y1)), Some((x2, y2))) = (s, t) else {
        return if s.is_none() { t } else { s };
    };
    let inv = |v: u64| pw(v % p, p - 2, p);
    let lam = if x1 == x2 {
        if (y1 + y2) % p == 0 {
            return None;
        }
        (3 * x1 % p * x1 % p + a) % p * inv(2 * y1) % p
    } else {
        (y2 + p - y1) % p * inv((x2 + p - x1) % p) % p
    };
    let x3 = (lam * lam % p + 2 * p - x1 - x2) % p;
    let y3 = (lam * ((x1 + p - x3) % p) % p + p - y1) % p;
    Some((x3, y3))
}

fn ec_mul(a: u64, p: u64, k: u64, s: P) -> P {
    (0..k).fold(None, |acc, _| ec_add(a, p, acc, s))
}

fn points_mod(a: u64, b: u64, p: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for x in 0..p {
        let r = (x * x % p * x + a * x + b) % p;
        for y in 0..p {
            if y * y % p == r {
                out.push((x, y));
            }
        }
    }
    out
}

fn reduce(x: &Rational, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    rational_mod(x, &BigInt::from(p)).unwrap().to_u64().unwrap()
}

/// Brute-force `#E(F_p)` for a general Weierstrass model.
fn brute_count(c: &Curve<Rational>, p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = c.coeffs().map(|v| reduce(v, p));
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
            let rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn division_polynomial_three() {
    for c in test_curves() {
        let d = division_poly(&c, 3);
        let z = c.zero_elem();
        let expect = Poly::new(&z, vec![-(&c.a * &c.a), &c.b * rat(12, 1), &c.a * rat(6, 1), z.clone(), rat(3, 1)]);
        assert_eq!(d.xpart, expect);
        assert!(!d.has_y_factor);
    }
}

#[test]
fn division_polynomial_degrees() {
    for c in test_curves() {
        let parts = division_xparts(&c, 12);
        for m in 2..=12u32 {
            assert_eq!(parts[m as usize].degree(), Some(DivPoly::<Rational>::expected_degree(m)), "m = {m}");
        }
    }
}

/// `F_m(x(P)) = 0` exactly when `[m]P = O` (or `P` is 2-torsion for even `m`), checked on all of `E(F_p)`.
#[test]
fn division_polynomials_vanish_on_torsion_mod_p() {
    let p = 211u64;
    for c in test_curves() {
        let (a, b) = (reduce(&c.a, p), reduce(&c.b, p));
        let parts = division_xparts(&c, 9);
        for (x, y) in points_mod(a, b, p) {
            for m in 2..=9u64 {
                let fm = parts[m as usize].coeffs().iter().rev().fold(0u64, |acc, co| (acc * x + reduce(co, p)) % p);
                let killed = ec_mul(a, p, m, Some((x, y))).is_none();
                let expect = fm == 0 || (m % 2 == 0 && y == 0);
                assert_eq!(killed, expect, "m = {m}, P = ({x}, {y})");
            }
        }
    }
}

#[test]
fn torsion_x_coordinates_sum_to_zero() {
    for c in test_curves() {
        for m in 2..=9 {
            assert_eq!(torsion_xsum(&c, m), rat(0, 1), "curve {:?}, m = {m}", c.curve());
        }
    }
}

#[test]
fn short_form_examples() {
    let fam = weierstrass_u_family(&rat(2, 1)).unwrap();
    let s = fam.curve.to_short().unwrap();
    assert_eq!((s.a.clone(), s.b.clone()), (rat(-11, 16), rat(-7, 32)));
    let leg = legendre_family(&rat(2, 1)).unwrap();
    let s = leg.curve.to_short().unwrap();
    assert_eq!((s.a.clone(), s.b.clone()), (rat(-1, 1), rat(0, 1)));
    assert_eq!(s.transform.r, rat(1, 1));
    let c = Curve::short(rat(3, 1), rat(5, 1));
    let s = c.to_short().unwrap();
    assert_eq!(s.transform, Transform::identity(&rat(0, 1)));
    assert_eq!(Curve::short(rat(0, 1), rat(0, 1)).to_short().unwrap_err(), Error::SingularCurve);
}

#[test]
fn short_form_of_general_model_preserves_j() {
    for u in [2i64, 3, 5] {
        let fam = tate_u_family(&rat(u, 1));
        let s = fam.curve.to_short().unwrap();
        assert_eq!(s.j_invariant().unwrap(), fam.curve.j_invariant().unwrap());
        assert_eq!(fam.curve.transform(&s.transform), s.curve());
    }
}

#[test]
fn counting_examples() {
    assert_eq!(reduce_and_count(&Curve::short(rat(1, 1), rat(0, 1)), 5).unwrap(), (2, 4));
    let fam = weierstrass_u_family(&rat(2, 1)).unwrap();
    assert_eq!(reduce_and_count(&fam.curve, 5).unwrap(), (-2, 8));
    assert_eq!(count_ext(-2, 5, 2), 32);
    let f25 = FqField::new(5, 2).unwrap();
    assert_eq!(count_over_fq(&fam.curve, &f25).unwrap(), 32);
    // y² = x³ − x has discriminant 64
    assert_eq!(
        reduce_and_count(&Curve::short(rat(-1, 1), rat(0, 1)), 2).unwrap_err(),
        Error::Config("2 is not an odd prime".into())
    );
    assert_eq!(reduce_and_count(&Curve::short(rat(0, 1), rat(1, 1)), 3).unwrap_err(), Error::BadReduction(3));
    assert_eq!(reduce_and_count(&Curve::short(rat(1, 3), rat(1, 1)), 3).unwrap_err(), Error::NonIntegralModel(3));
}

#[test]
fn count_ext_recurrence() {
    for p in [5u64, 7, 11, 13] {
        for a in [-3i64, 0, 2] {
            assert_eq!(count_ext(a, p, 1), p as i128 + 1 - a as i128);
        }
        assert_eq!(count_ext(0, p, 2), (p * p + 1 + 2 * p) as i128);
    }
}

fn count_curves() -> Vec<Curve<Rational>> {
    vec![
        Curve::short(rat(1, 1), rat(0, 1)),
        Curve::short(rat(2, 1), rat(3, 1)),
        Curve::new(rat(0, 1), rat(-1, 1), rat(1, 1), rat(0, 1), rat(0, 1)),
        tate_u_family(&rat(2, 1)).curve,
        legendre_family(&rat(3, 1)).unwrap().curve,
    ]
}

#[test]
fn counts_agree_with_brute_force_and_quadratic_extension() {
    for c in count_curves() {
        let mut checked = 0;
        for p in [3u64, 5, 7, 11, 13] {
            let Ok((a_p, n)) = reduce_and_count(&c, p) else { continue };
            assert_eq!(n, brute_count(&c, p), "{c:?} at {p}");
            let fq = FqField::new(p, 2).unwrap();
            assert_eq!(count_over_fq(&c, &fq).unwrap() as i128, count_ext(a_p, p, 2), "{c:?} over F_{p}^2");
            assert!(a_p * a_p <= 4 * p as i64);
            checked += 1;
        }
        assert!(checked >= 3, "{c:?}");
    }
}

#[test]
fn two_isogeny_from_rational_two_torsion() {
    // x0 = 0 on y² = x³ − x: t = 3x0² + A = −1, w = x0·t = 0
    let e = short_q(rat(-1, 1), rat(0, 1));
    let iso = velu_from_poly(&e, &Poly::x(&rat(0, 1))).unwrap();
    assert_eq!((iso.codomain.a.clone(), iso.codomain.b.clone()), (rat(4, 1), rat(0, 1)));
    assert_eq!(iso.degree, 2);
    assert_eq!(iso.pullback_second(), DeRhamVec::new(rat(0, 1), rat(2, 1)));
    // x0 = 2 on y² = (x − 2)(x² + 2x + 5) = x³ + x − 10
    let e = short_q(rat(1, 1), rat(-10, 1));
    let x0 = rat(2, 1);
    let t = &x0 * &x0 * rat(3, 1) + rat(1, 1);
    let w = &x0 * &t;
    let iso = velu_from_poly(&e, &Poly::linear(&x0)).unwrap();
    assert_eq!(iso.codomain.a, rat(1, 1) - &t * rat(5, 1));
    assert_eq!(iso.codomain.b, rat(-10, 1) - &w * rat(7, 1));
    assert_eq!(iso.kernel_xsum, x0);
}

#[test]
fn five_isogeny_from_rational_point() {
    // y² + y = x³ − x² has the rational 5-torsion point (0, 0).
    let e = Curve::new(rat(0, 1), rat(-1, 1), rat(1, 1), rat(0, 1), rat(0, 1));
    let s = e.to_short().unwrap();
    let inv = s.transform.inverse();
    let (x, y) = inv.point_backward(&rat(0, 1), &rat(0, 1));
    assert!(s.curve().contains(&x, &y));
    let iso = velu_from_point(&s, &Some((x.clone(), y)), 10).unwrap();
    assert_eq!(iso.degree, 5);
    assert_eq!(iso.kernel_xpoly.degree(), Some(2));
    let f5 = division_poly(&s, 5).xpart;
    assert!(f5.divrem(&iso.kernel_xpoly).unwrap().1.is_zero());
    assert_eq!(iso.kernel_xsum, iso.kernel_xpoly.coeff(1).times_int(-2));
}

#[test]
fn invalid_kernels_are_rejected() {
    let e = short_q(rat(2, 1), rat(3, 1));
    assert!(matches!(velu_from_poly(&e, &Poly::linear(&rat(5, 1))), Err(Error::InvalidKernel(_))));
    let sq = Poly::linear(&rat(0, 1)).times(&Poly::linear(&rat(0, 1)));
    assert!(matches!(velu_from_poly(&e, &sq), Err(Error::InvalidKernel(_))));
    assert!(matches!(velu_from_point(&e, &Some((rat(0, 1), rat(0, 1))), 10), Err(Error::InvalidKernel(_))));
}

#[test]
fn multiplication_pullback() {
    for c in test_curves() {
        for m in 1..=5u32 {
            let iso = Isogeny::multiplication(&c, m);
            assert_eq!(iso.pullback_second(), DeRhamVec::new(rat(0, 1), rat(m as i64, 1)));
            assert_eq!(mat_det(&iso.pullback_matrix()), rat((m * m) as i64, 1));
        }
    }
}

fn find_order_six(p: u64) -> (u64, u64, (u64, u64)) {
    for a in 1..p {
        for b in 1..p {
            if (4 * pw(a, 3, p) + 27 * b % p * b) % p == 0 {
                continue;
            }
            for pt in points_mod(a, b, p) {
                let s = Some(pt);
                if ec_mul(a, p, 6, s).is_none() && ec_mul(a, p, 2, s).is_some() && ec_mul(a, p, 3, s).is_some() {
                    return (a, b, pt);
                }
            }
        }
    }
    unreachable!()
}

/// `φ2 ∘ φ1` with kernels of order 2 then 3 equals the Vélu isogeny of the cyclic
/// kernel of order 6, and the pullback matrices compose contravariantly.
#[test]
fn pullback_is_functorial_over_finite_field() {
    let p = 101u64;
    let (a, b, (x, y)) = find_order_six(p);
    let zp = |v: u64| Zmod64::new(v, p);
    let e = ShortCurve::new(zp(a), zp(b)).unwrap();
    let pt = Some((zp(x), zp(y)));
    let three_p = e.mul(3, &pt);
    let phi1 = velu_from_point(&e, &three_p, 10).unwrap();
    let image = phi1.map_point(&pt);
    assert!(phi1.codomain.is_on_curve(&image));
    let phi2 = velu_from_point(&phi1.codomain, &image, 10).unwrap();
    let psi = velu_from_point(&e, &pt, 10).unwrap();
    assert_eq!(psi.degree, 6);
    assert_eq!((psi.codomain.a, psi.codomain.b), (phi2.codomain.a, phi2.codomain.b));
    assert_eq!(psi.pullback_matrix(), mat_mul(&phi1.pullback_matrix(), &phi2.pullback_matrix()));
    assert_eq!(mat_det(&psi.pullback_matrix()), zp(6));
    // the isogeny is a homomorphism with the right kernel
    let pts: Vec<Point<Zmod64>> = points_mod(a, b, p).into_iter().map(|(u, v)| Some((zp(u), zp(v)))).collect();
    for s in pts.iter().take(40) {
        for t in pts.iter().skip(7).take(15) {
            let lhs = psi.map_point(&e.add(s, t));
            let rhs = psi.codomain.add(&psi.map_point(s), &psi.map_point(t));
            assert_eq!(lhs, rhs);
        }
        assert!(psi.codomain.is_on_curve(&psi.map_point(s)));
    }
    for k in 0..6 {
        assert_eq!(psi.map_point(&e.mul(k, &pt)), None);
    }
}

#[test]
fn kernel_search_finds_rational_three_torsion() {
    // y² = x³ + 1: ψ3 = 3x(x³ + 4), and x = 0 is the only rational root.
    let e = short_q(rat(0, 1), rat(1, 1));
    let ks = kernel_search(&e, 3).unwrap();
    assert_eq!(ks, vec![Poly::x(&rat(0, 1))]);
}

#[test]
fn kernel_search_on_cm_curve_over_gaussian_field() {
    let s = weierstrass_u_family(&rat(2, 1)).unwrap().curve.to_short().unwrap();
    assert!(kernel_search(&s, 5).unwrap().is_empty());
    let i = QuadElem::rational(rat(0, 1), rat(1, 1), -1).unwrap();
    let lift = |x: &Rational| i.from_rational_like(x).unwrap();
    let sl = s.map(lift);
    let ks = kernel_search(&sl, 5).unwrap();
    assert_eq!(ks.len(), 2);
    let conj = ks[0].map(&i.zero_like(), |c| c.conj());
    assert_eq!(conj, ks[1]);
    // the norm of either factor is a rational factor of ψ5
    let norm = ks[0].times(&ks[1]);
    assert!(norm.coeffs().iter().all(|c| c.b.is_zero()));
    let f5 = division_poly(&s, 5).xpart.map(&i.zero_like(), |c| lift(c));
    assert!(f5.divrem(&norm).unwrap().1.is_zero());
    for g in &ks {
        let iso = velu_from_poly(&sl, g).unwrap();
        assert_eq!(iso.codomain.j_invariant().unwrap(), lift(&rat(287496, 1)));
    }
}

#[test]
fn kernel_search_rejects_bad_degree() {
    let e = short_q(rat(0, 1), rat(1, 1));
    assert!(matches!(kernel_search(&e, 9), Err(Error::Config(_))));
    assert!(matches!(kernel_search(&e, 17), Err(Error::Config(_))));
}

#[test]
fn cm_eigenbasis_of_e2() {
    let fam = weierstrass_u_family(&rat(2, 1)).unwrap();
    assert_eq!(fam.curve.j_invariant().unwrap(), rat(287496, 1));
    assert_eq!(norm_primes(&two_i()), vec![5, 13]);
    let r = cm_eigenbasis(&fam, &two_i()).unwrap();
    assert_eq!(r.ell, 5);
    assert_eq!(r.holomorphic, DeRhamVec::new(rat(1, 1), rat(0, 1)));
    assert_eq!(r.other, DeRhamVec::new(rat(1, 1), rat(4, 1)));
    for v in &r.short_eigenvectors {
        assert!(mat_apply(&r.scaled_matrix, v).parallel(v));
    }
    let r13 = cm_eigenbasis_with_ell(&fam, &two_i(), 13).unwrap();
    assert_eq!(r13.other, r.other);
}

#[test]
fn cm_eigenbasis_of_legendre_curve() {
    let u = legendre_cm_parameter();
    let fam = legendre_family(&u).unwrap();
    assert_eq!(fam.curve.j_invariant().unwrap(), u.from_int_like(287496));
    let r = cm_eigenbasis(&fam, &two_i()).unwrap();
    let s = sqrt2();
    assert_eq!(r.holomorphic, DeRhamVec::new(s.one_like(), s.zero_like()));
    assert_eq!(r.other, DeRhamVec::new(s.one_like(), s.sqrt_d().times_int(2).minus(&s.from_int_like(3))));
    for v in &r.short_eigenvectors {
        assert!(mat_apply(&r.scaled_matrix, v).parallel(v));
    }
}

#[test]
fn cm_eigenbasis_errors() {
    let fam = legendre_family(&rat(-1, 1)).unwrap();
    assert!(matches!(cm_eigenbasis(&fam, &two_i()), Err(Error::SingularJ(_))));
    // y² = x³ + 2x + 3 has no CM
    let fam = FamilyModel::plain("plain", Curve::short(rat(2, 1), rat(3, 1)));
    assert!(matches!(cm_eigenbasis(&fam, &two_i()), Err(Error::NotAnEndomorphism(_))));
}

#[test]
fn j_at_class_number_one_points() {
    assert_eq!(cm_j_from_disc(4, 256).unwrap(), BigInt::from(1728));
    assert_eq!(cm_j_from_disc(7, 256).unwrap(), BigInt::from(-3375));
    assert_eq!(cm_j_from_disc(8, 256).unwrap(), BigInt::from(8000));
    assert_eq!(cm_j_from_disc(163, 256).unwrap(), -BigInt::from(640320).pow(3));
    assert_eq!(cm_j_from_form(1, 1, 2, 256).unwrap(), BigInt::from(-3375));
    // 2i has j = 66³, but √−5 is not a class number one point
    assert_eq!(cm_j_from_disc(16, 256).unwrap(), BigInt::from(66).pow(3));
    assert!(matches!(cm_j_from_disc(20, 256), Err(Error::NotNearInteger(_))));
}

#[test]
fn ramanujan_series_at_legendre_cm_point() {
    let u = legendre_cm_parameter();
    let s = sqrt2();
    let c2 = s.sqrt_d().times_int(2).minus(&s.from_int_like(3));
    let r = ramanujan_pi(&u, &s.one_like(), &c2, 40).unwrap();
    assert_eq!(r.a, s.from_int_like(6));
    assert_eq!(r.lambda, s.from_rational_like(&rat(-1, 8)).unwrap());
    assert!((r.partial_sum - 2.0 * 2f64.sqrt() / std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(ramanujan_pi(&u, &s.one_like(), &c2, 0).unwrap().partial_sum, 1.0);
    assert!(matches!(ramanujan_pi(&rat(1, 2), &rat(1, 1), &rat(0, 1), 5), Err(Error::DivergentParameter(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hasse_bound_holds(a in -50i64..50, b in -50i64..50, pi in 0usize..25) {
        let primes = fp::primes_between(3, 100);
        let p = primes[pi % primes.len()];
        let c = Curve::short(rat(a, 1), rat(b, 1));
        if let Ok((ap, n)) = reduce_and_count(&c, p) {
            prop_assert!(ap * ap <= 4 * p as i64);
            prop_assert_eq!(n as i64, p as i64 + 1 - ap);
        }
    }

    #[test]
    fn transforms_round_trip(u in 1i64..6, r in -5i64..5, s in -5i64..5, t in -5i64..5, a in -9i64..9, b in -9i64..9) {
        let c = Curve::new(rat(1, 1), rat(a, 1), rat(0, 1), rat(b, 1), rat(1, 1));
        let tr = Transform { u: rat(u, 2), r: rat(r, 1), s: rat(s, 1), t: rat(t, 3) };
        let back = c.transform(&tr).transform(&tr.inverse());
        prop_assert_eq!(back, c.clone());
        let composed = c.transform(&tr).transform(&tr);
        prop_assert_eq!(composed, c.transform(&tr.then(&tr)));
        if let Ok(j) = c.j_invariant() {
            prop_assert_eq!(c.transform(&tr).j_invariant().unwrap(), j);
        }
    }

    #[test]
    fn class_transport_round_trips(u in 1i64..6, r in -5i64..5, c1 in -9i64..9, c2 in -9i64..9) {
        let tr = Transform { u: rat(u, 1), r: rat(r, 1), s: rat(0, 1), t: rat(0, 1) };
        let v = DeRhamVec::new(rat(c1, 1), rat(c2, 1));
        prop_assert_eq!(tr.class_backward(&tr.class_forward(&v)), v);
    }
}
