use asdlab::exactnum::*;
use asdlab::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Euler's criterion by repeated multiplication, independent of the library.
fn euler_symbol(a: i64, p: i64) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut acc = 1i64;
    for _ in 0..(p - 1) / 2 {
        acc = acc * a % p;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

#[test]
fn kronecker_examples() {
    assert_eq!(kronecker(-1, 5), 1);
    assert_eq!(kronecker(-1, 7), -1);
    assert_eq!(kronecker(2, 7), 1);
    assert_eq!(kronecker(5, 10), 0);
    assert_eq!(kronecker(-1, -1), -1);
}

#[test]
fn kronecker_matches_euler_on_odd_primes() {
    for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        for a in -40..40 {
            assert_eq!(kronecker(a, p), euler_symbol(a, p), "({a}/{p})");
        }
    }
}

proptest! {
    #[test]
    fn kronecker_multiplicative(a in -200i64..200, b in -200i64..200, n in 1i64..300) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn kronecker_multiplicative_in_denominator(a in -200i64..200, m in 1i64..100, n in 1i64..100) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn rational_field_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50, e in -50i64..50, f in 1i64..50) {
        let x = rat(a, b);
        let y = rat(c, d);
        let z = rat(e, f);
        prop_assert_eq!(x.times(&y.plus(&z)), x.times(&y).plus(&x.times(&z)));
        prop_assert_eq!(x.times(&y).times(&z), x.times(&y.times(&z)));
        if a != 0 {
            prop_assert_eq!(x.times(&x.try_inv().unwrap()), rat(1, 1));
        }
        let s = x.plus(&y);
        prop_assert!(num_integer::Integer::gcd(s.numer(), s.denom()) == big(1));
    }

    #[test]
    fn quad_conjugation_is_ring_map(a in -20i64..20, b in -20i64..20, c in -20i64..20, e in -20i64..20, d in prop::sample::select(vec![-7i64, -2, -1, 2, 3, 5])) {
        let x = QuadElem::rational(rat_int(a), rat_int(b), d).unwrap();
        let y = QuadElem::rational(rat_int(c), rat_int(e), d).unwrap();
        prop_assert_eq!(x.times(&y).conj(), x.conj().times(&y.conj()));
        prop_assert_eq!(x.plus(&y).conj(), x.conj().plus(&y.conj()));
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert!(x.times(&x.conj()).b.is_zero());
    }

    #[test]
    fn unit_root_solves_quadratic(p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 101]), ap in -20i64..20, n in 1u32..12) {
        prop_assume!(ap.rem_euclid(p as i64) != 0);
        let mu = unit_root(ap, p, n).unwrap();
        prop_assert_eq!(mu.valuation(), Some(0));
        let lhs = mu.mul(&mu).sub(&PadicNum::from_int(ap, p, n).mul(&mu)).add(&PadicNum::from_int(p as i64, p, n));
        prop_assert!(lhs.eq_mod(&PadicNum::zero(p, n as i64), n as i64));
    }

    #[test]
    fn gamma_p_solves_power_equation(p in prop::sample::select(vec![5u64, 7, 11, 13]), dnum in 1i64..30, nu in 1u64..6, n in 1u32..10) {
        prop_assume!(dnum % p as i64 != 0 && nu % p != 0);
        let d = rat_int(dnum);
        let g = gamma_p(&d, nu, p, n).unwrap();
        let target = PadicNum::from_rational(&d, p, n).pow(p as i64 - 1).unwrap();
        prop_assert!(g.pow(nu as i64).unwrap().eq_mod(&target, n as i64));
        prop_assert_eq!(g.residue(1).unwrap(), big(1));
    }

    #[test]
    fn split_embedding_is_multiplicative(a in -20i64..20, b in -20i64..20, c in -20i64..20, e in -20i64..20) {
        // 2 is a square modulo 7, so 7 splits in Q(√2).
        let x = QuadElem::rational(rat_int(a), rat_int(b), 2).unwrap();
        let y = QuadElem::rational(rat_int(c), rat_int(e), 2).unwrap();
        let (p, n) = (7u64, 6u32);
        let lhs = embed_quad(&x.times(&y), p, n).unwrap();
        let rhs = embed_quad(&x, p, n).unwrap().mul(&embed_quad(&y, p, n).unwrap());
        prop_assert!(lhs.eq_mod(&rhs, n as i64));
    }
}

#[test]
fn hensel_sqrt_examples() {
    let r = hensel_sqrt(&rat_int(4), 7, 3).unwrap();
    assert_eq!(r.residue(3).unwrap(), big(2));
    let r = hensel_sqrt(&rat_int(2), 7, 2).unwrap();
    assert_eq!(r.residue(2).unwrap(), big(10));
    assert_eq!((10 * 10 - 2) % 49, 0);
    assert!(matches!(hensel_sqrt(&rat_int(3), 5, 1), Err(Error::NonResidue(_, 5))));
    let r = hensel_sqrt(&rat(2, 49), 7, 4).unwrap();
    assert_eq!(r.val, -1);
}

#[test]
fn unit_root_examples() {
    assert_eq!(unit_root(-2, 5, 1).unwrap().residue(1).unwrap(), big(3));
    assert_eq!(unit_root(-2, 5, 2).unwrap().residue(2).unwrap(), big(13));
    assert!(matches!(unit_root(0, 7, 3), Err(Error::SupersingularInput(0, 7))));
}

#[test]
fn gamma_p_examples() {
    assert_eq!(gamma_p(&rat_int(1), 3, 5, 4).unwrap().residue(4).unwrap(), big(1));
    assert_eq!(gamma_p(&rat_int(1), 4, 11, 4).unwrap().residue(4).unwrap(), big(1));
    let g = gamma_p(&rat_int(2), 2, 7, 2).unwrap();
    assert_eq!(g.residue(2).unwrap(), big(8));
    assert_eq!(64 % 49, (1 << 6) % 49);
}

#[test]
fn valuation_examples() {
    assert_eq!(valuation(&rat_int(50), 5), Some(2));
    assert_eq!(valuation(&rat(3, 25), 5), Some(-2));
    assert_eq!(valuation(&rat_int(0), 7), None);
}

#[test]
fn padic_mixed_precision_truncates() {
    let a = PadicNum::from_int(3, 5, 10);
    let b = PadicNum::from_int(1, 5, 2);
    assert_eq!(a.add(&b).abs_precision(), 2);
    assert_eq!(a.mul(&b).abs_precision(), 2);
    let c = PadicNum::from_int(25, 5, 3);
    assert_eq!(c.val, 2);
    assert_eq!(c.abs_precision(), 5);
}

#[test]
fn finite_field_small_cases() {
    let f9 = FqField::new(3, 2).unwrap();
    let elems: Vec<FqElem> = f9.elements().collect();
    assert_eq!(elems.len(), 9);
    let units: Vec<&FqElem> = elems.iter().filter(|x| !x.is_zero()).collect();
    for x in &units {
        assert!(x.pow_u(8).is_one());
    }
    assert!(units.iter().any(|x| (1..8).all(|k| !x.pow_u(k).is_one())), "cyclic of order 8");

    let f49 = FqField::new(7, 2).unwrap();
    for x in f49.elements().filter(|x| !x.is_zero()) {
        assert!(x.times(&x.try_inv().unwrap()).is_one());
    }

    let f25 = FqField::new(5, 2).unwrap();
    assert_eq!(f25.modulus, vec![3, 0, 1], "x^2 - 2");
    for r in 0..5u64 {
        assert_ne!((r * r) % 5, 2);
    }
    let f8 = FqField::new(2, 3).unwrap();
    assert_eq!(f8.elements().count(), 8);
    let f27 = FqField::new(3, 3).unwrap();
    for x in f27.elements().filter(|x| !x.is_zero()) {
        assert!(x.pow_u(26).is_one());
    }
}

#[test]
fn zmod_matches_bigint_arithmetic() {
    let m = 5u64.pow(20);
    let z = Zmod64::modulus_zero(m);
    let a = z.from_int_like(123456789);
    let b = z.from_int_like(-987654321);
    let prod = (big(123456789) * big(-987654321)).modpow(&big(1), &big(m as i64));
    let expect = ((prod % big(m as i64)) + big(m as i64)) % big(m as i64);
    assert_eq!(BigInt::from(a.times(&b).v), expect);
    let inv = z.from_rational_like(&rat(1, 3)).unwrap();
    assert!(inv.times(&z.from_int_like(3)).is_one());
    assert!(z.from_rational_like(&rat(1, 5)).is_none());
    let zb = ZmodBig::modulus_zero(num_bigint::BigUint::from(m));
    let x = zb.from_int_like(123456789).times(&zb.from_int_like(-987654321));
    assert_eq!(x.to_bigint(), expect);
}

#[test]
fn zmod_dot_product_matches_naive() {
    let m = (1u64 << 61) - 1;
    let z = Zmod64::modulus_zero(m);
    let a: Vec<Zmod64> = (0..100).map(|i| z.from_int_like(i * 7919 + (1 << 40))).collect();
    let b: Vec<Zmod64> = (0..100).map(|i| z.from_int_like(-(i * 104729) - (1 << 50))).collect();
    let fast = Zmod64::dot_rev(&a, &b, &z);
    let mut naive = z;
    for i in 0..100 {
        naive = naive.plus(&a[i].times(&b[99 - i]));
    }
    assert_eq!(fast, naive);
}

#[test]
fn rational_reconstruction_roundtrip() {
    use asdlab::exactnum::rational::rational_reconstruct;
    let m = big(7).pow(40);
    for (a, b) in [(3i64, 11i64), (-12345, 678), (1, 999_983)] {
        let x = rat(a, b);
        let r = rational_mod(&x, &m).unwrap();
        let bound = big(10).pow(12);
        assert_eq!(rational_reconstruct(&r, &m, &bound, &big(1_000_000)), Some(x));
    }
}
