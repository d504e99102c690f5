use asdlab::exactnum::*;
use asdlab::modforms::*;
use asdlab::qseries::QSeries;
use asdlab::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

fn z() -> Rational {
    rat_int(0)
}

fn coeffs(f: &QSeries<Rational>, from: i64, to: i64) -> Vec<Rational> {
    f.coeff_range(from, to).unwrap()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

/// Apéry numbers from factorials, independent of the library's incremental binomials.
fn apery_oracle(n: u64) -> BigInt {
    let fact = |m: u64| (1..=m).fold(BigInt::one(), |a, b| a * BigInt::from(b));
    (0..=n)
        .map(|k| {
            let c = fact(n) / (fact(k) * fact(n - k));
            let d = fact(n + k) / (fact(k) * fact(n));
            &c * &c * d
        })
        .sum()
}

fn only_primes_in_denominators(f: &QSeries<Rational>, allowed: &[u64]) -> bool {
    f.coeffs().iter().all(|c| {
        let mut d = c.denom().clone();
        for &p in allowed {
            let bp = BigInt::from(p);
            while (&d % &bp).is_zero() {
                d /= &bp;
            }
        }
        d.is_one()
    })
}

#[test]
fn theta_squared_initial_terms() {
    let t2 = build(&FormId::Theta2, &z(), 6).unwrap();
    assert_eq!(coeffs(&t2, 0, 6), ints(&[1, 4, 4, 0, 4, 8]));
}

#[test]
fn apery_numbers_match_factorial_oracle() {
    let a = apery_numbers(40);
    assert_eq!(&a[..4], &[BigInt::from(1), BigInt::from(3), BigInt::from(19), BigInt::from(147)]);
    for (n, x) in a.iter().enumerate() {
        assert_eq!(*x, apery_oracle(n as u64));
    }
}

#[test]
fn apery_form_routes_agree() {
    let n = 160;
    let slow = apery_f_definitional(&z(), n);
    let fast = apery_f(&z(), n);
    assert!(slow.compare_upto(&fast, n).unwrap());
    assert_eq!(coeffs(&fast, 0, 9), ints(&[0, 1, -7, 19, -23, 1, 47, -97, 105]));
}

#[test]
fn c4_leading_terms_and_magnetic_denominators() {
    let c = c4(&z(), 1000).unwrap();
    assert_eq!(c.coeff_index(0).unwrap(), rat_int(0));
    assert_eq!(c.coeff_index(1).unwrap(), rat_int(1));
    assert!(only_primes_in_denominators(&c, &[2]));
}

#[test]
fn integrality_of_products_to_1000() {
    let n = 1000;
    for f in [delta(&z(), n), hauptmodul_a(&z(), n), t_gamma1_5(&z(), n), eta4_6(&z(), n), theta_power(&z(), 2, n)] {
        assert!(f.is_integral());
        assert_eq!(f.trunc(), n);
    }
    let lam = lambda(&z(), n);
    assert!(lam.coeffs().iter().all(|c| c.is_integer() && c.numer().is_multiple_of(&BigInt::from(16))));
    let a = hauptmodul_a(&z(), 4);
    assert_eq!(coeffs(&a, 0, 4), ints(&[0, 1, 24, 300]));
}

#[test]
fn h2_coefficients_lie_in_z_tenth() {
    let h = h2(&z(), 1000).unwrap();
    assert_eq!(h.mu(), 2);
    assert!(only_primes_in_denominators(&h, &[2, 5]));
    let t = t2(&z(), 400).unwrap();
    let t_full = t_gamma1_5(&z(), 200).rebase(2).unwrap();
    assert!((&t * &t).compare_upto(&t_full, 399).unwrap());
}

#[test]
fn level_one_uniqueness() {
    let n = 300;
    let e = |k| eisenstein(&z(), k, n).unwrap();
    assert!(e(8).compare_upto(&(&e(4) * &e(4)), n).unwrap());
    assert!(e(10).compare_upto(&(&e(4) * &e(6)), n).unwrap());
    assert!(e(14).compare_upto(&(&(&e(4) * &e(4)) * &e(6)), n).unwrap());
    assert_eq!(e(2).coeff_index(1).unwrap(), rat_int(-24));
    assert_eq!(e(4).coeff_index(6).unwrap(), rat_int(240 * 252));
    let j = j_invariant(&z(), 5).unwrap();
    assert_eq!(coeffs(&j, -1, 2), ints(&[1, 744, 196884]));
}

#[test]
fn phi0_divisor_sum() {
    let f = phi0(&z(), 10);
    assert_eq!(f.coeff_index(2).unwrap(), rat_int(24));
    assert_eq!(f.coeff_index(1).unwrap(), rat_int(24));
}

#[test]
fn weight_three_definitional_identities() {
    let n = 120;
    let u = rat_int(2);
    let lam = lambda(&z(), n);
    let base = &theta_power(&z(), 2, n) * &lam.theta_deriv();
    let l_minus_u = lam.add_const(&-u.clone());
    let f = mero_w3_f(&z(), &u, n).unwrap();
    assert_eq!(f.coeff_index(1).unwrap(), rat_int(-8));
    assert!((&l_minus_u * &f).compare_upto(&base, n).unwrap());
    let (c1, c2) = (rat_int(1), rat_int(4));
    let g = mero_w3_g(&z(), &u, &c1, &c2, n).unwrap();
    let lhs = &(&l_minus_u * &l_minus_u) * &g;
    let a2 = &c2 * &u * (rat_int(1) - &u);
    let a1 = &c1 - &c2 * (rat_int(5) * &u - rat_int(1)) / rat_int(12);
    let rhs = base.scale(&a2).plus(&(&l_minus_u * &base).scale(&a1));
    assert!(lhs.compare_upto(&rhs, n).unwrap());
    assert!(matches!(mero_w3_f(&z(), &rat_int(1), 10), Err(Error::PoleAtCuspParameter(_))));
    assert!(matches!(mero_w3_f(&z(), &rat_int(0), 10), Err(Error::PoleAtCuspParameter(_))));
}

#[test]
fn weight_four_and_five_definitional_identities() {
    let n = 100;
    let u = rat_int(2);
    let lam = lambda(&z(), n);
    let base = &theta_power(&z(), 4, n) * &lam.theta_deriv();
    let l_minus_u = lam.add_const(&-u.clone());
    let f = mero_w4_f(&z(), &u, n).unwrap();
    assert!((&l_minus_u * &f).compare_upto(&base, n).unwrap());
    assert_eq!(poly_p(&u).unwrap(), rat(17, 16));
    assert_eq!(poly_q(&u).unwrap(), rat(9, 2));
    let (c1, c2) = (rat_int(1), rat_int(4));
    let h = mero_w4_h(&z(), &u, &c1, &c2, n).unwrap();
    let cleared = &(&(&l_minus_u * &l_minus_u) * &l_minus_u) * &h;
    let one = rat_int(1);
    let uu = &u * (&one - &u);
    let a3 = &c2 * &c2 * &uu * &uu;
    let a2 = &c2 * &c2 * poly_q(&u).unwrap() + &c1 * &c2 * &uu;
    let a1 = &c2 * &c2 * poly_p(&u).unwrap() + &c1 * &c1 - (rat_int(5) * &u - &one) * &c1 * &c2 / rat_int(6);
    let rhs =
        base.scale(&a3).plus(&(&l_minus_u * &base).scale(&a2)).plus(&(&(&l_minus_u * &l_minus_u) * &base).scale(&a1));
    assert!(cleared.compare_upto(&rhs, n).unwrap());
    assert_eq!(a3, rat_int(64));
    let w5 = mero_w5(&z(), n).unwrap();
    assert_eq!(w5.coeff_index(1).unwrap(), rat_int(16));
    let one_minus_2l = lam.scale_int(-2).add_const(&rat_int(1));
    let base6 = &theta_power(&z(), 6, n) * &lam.theta_deriv();
    assert!((&one_minus_2l * &w5).compare_upto(&base6, n).unwrap());
}

#[test]
fn gamma2_form_identity() {
    let n = 200;
    let u = rat_int(1);
    let b = gamma2_form(&z(), &u, n).unwrap();
    assert_eq!(b.mu(), 2);
    let t = t2(&z(), n + 4).unwrap();
    let f = apery_f(&z(), n).rebase(2).unwrap();
    let lhs = &t.add_const(&-u) * &b;
    assert!(lhs.compare_upto(&(&t * &f), n).unwrap());
    // b(1) = −F(0)... the leading term is t₂·F/(−u) = −q^{3/2}/u.
    assert_eq!(b.lo(), 3);
    assert_eq!(b.coeff_index(3).unwrap(), rat_int(-1));
}

#[test]
fn level_one_avatar() {
    let n = 80;
    let jval = rat_int(-3375);
    for k in [4u32, 6, 8, 10, 14] {
        let f = level1_form(&z(), k, &jval, n).unwrap();
        assert_eq!(f.lo(), 1);
        let j = j_invariant(&z(), n).unwrap().add_const(&-jval.clone());
        assert!((&j * &f).compare_upto(&eisenstein(&z(), k, n).unwrap(), n - 1).unwrap());
    }
    assert!(matches!(level1_form(&z(), 4, &rat_int(1728), 10), Err(Error::SingularJ(_))));
    assert!(matches!(level1_form(&z(), 4, &rat_int(0), 10), Err(Error::SingularJ(_))));
}

#[test]
fn example_pair_relations() {
    let n = 120;
    let (f, g) = lambda_pole_pair(&z(), n).unwrap();
    let lam = lambda(&z(), n);
    let lhs = &g * &lam.add_const(&rat_int(-2));
    let rhs = &f * &lam.add_const(&rat_int(2));
    assert!(lhs.compare_upto(&rhs, n).unwrap());
    assert!(f.compare_upto(&mero_w3_f(&z(), &rat_int(2), n).unwrap(), n).unwrap());
    let g3 = mero_w3_g(&z(), &rat_int(2), &rat_int(1), &rat_int(4), n).unwrap();
    let scalar = g.coeff_index(1).unwrap() / g3.coeff_index(1).unwrap();
    for k in 1..11 {
        assert_eq!(g.coeff_index(k).unwrap(), &scalar * g3.coeff_index(k).unwrap());
    }
    assert!(g.compare_upto(&g3.scale(&scalar), n).unwrap());
}

#[test]
fn identity_suite_holds_to_200() {
    for id in Identity::ALL {
        assert!(verify_identity(id, 200).unwrap(), "{id}");
    }
}

#[test]
fn perturbed_identity_is_rejected() {
    for id in Identity::ALL {
        let sides = identity_sides(id, 60).unwrap();
        let (lhs, rhs) = &sides[0];
        let bump = QSeries::monomial(rat(1, 7), 37, 1, rhs.trunc());
        assert!(!lhs.compare_upto(&(rhs + &bump), 60).unwrap(), "{id}");
    }
}

#[test]
fn form_ids_roundtrip() {
    for id in FormId::simple_ids() {
        assert_eq!(id.to_string().parse::<FormId>().unwrap(), id);
    }
    let h: FormId = "mero_w4_h[u=2,c1=1,c2=4]".parse().unwrap();
    assert_eq!(h, FormId::MeroW4H { u: rat_int(2), c1: rat_int(1), c2: rat_int(4) });
    assert_eq!(h.to_string(), "mero_w4_h[u=2,c1=1,c2=4]");
    let l: FormId = "level1[k=6,j=-3375]".parse().unwrap();
    assert_eq!(l.weight(), 6);
    assert!("mero_w3_f".parse::<FormId>().is_err());
    assert!("E3".parse::<FormId>().is_err());
    assert_eq!("gamma2[u=1/3]".parse::<FormId>().unwrap().mu(), 2);
}

#[test]
fn residue_ring_builds_match_rational_reduction() {
    let m = 13u64.pow(8);
    let zm = Zmod64::modulus_zero(m);
    let id: FormId = "mero_w4_h[u=2,c1=1,c2=4]".parse().unwrap();
    let exact = build(&id, &z(), 80).unwrap();
    let modular = build(&id, &zm, 80).unwrap();
    for k in 0..80 {
        assert_eq!(modular.coeff_index(k).unwrap(), zm.from_rational_like(&exact.coeff_index(k).unwrap()).unwrap());
    }
    let g = build(&FormId::Gamma2 { u: rat_int(1) }, &zm, 60).unwrap();
    let ge = build(&FormId::Gamma2 { u: rat_int(1) }, &z(), 60).unwrap();
    for k in 0..60 {
        assert_eq!(g.coeff_index(k).unwrap(), zm.from_rational_like(&ge.coeff_index(k).unwrap()).unwrap());
    }
    let five = Zmod64::modulus_zero(5u64.pow(6));
    assert!(matches!(build(&FormId::MeroW3F { u: rat(1, 5) }, &five, 10), Err(Error::NotInRing(_))));
}

#[test]
fn store_memoises_and_disk_cache_is_transparent() {
    let dir = std::env::temp_dir().join(format!("asdlab-store-{}", std::process::id()));
    let id = FormId::MeroW3F { u: rat_int(3) };
    let cold = FormStore::new(Some(dir.clone()));
    let a = cold.get(&id, &z(), 50).unwrap();
    let b = cold.get(&id, &z(), 30).unwrap();
    assert_eq!(b, a.truncate(30));
    let warm = FormStore::new(Some(dir.clone()));
    assert_eq!(warm.get(&id, &z(), 50).unwrap(), a);
    let zm = Zmod64::modulus_zero(7u64.pow(5));
    let via_cache = warm.get(&id, &zm, 50).unwrap();
    let direct = build(&id, &zm, 50).unwrap();
    assert_eq!(via_cache, direct);
    std::fs::remove_dir_all(&dir).ok();
}
