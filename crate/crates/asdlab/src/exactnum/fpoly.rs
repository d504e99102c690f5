//! Dense polynomials over a word-sized prime field, little-endian coefficients.

use rand::Rng;

use super::fp::{inv_mod, mul_mod};

pub type FPoly = Vec<u64>;

pub fn trim(mut a: FPoly) -> FPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

pub fn scale(a: &[u64], c: u64, p: u64) -> FPoly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FPoly, FPoly) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = mul_mod(r[r.len() - 1], inv, p);
        q[k] = c;
        for (j, &y) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mul_mod(c, y, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> FPoly {
    let a = trim(a.to_vec());
    match a.last() {
        None => a,
        Some(&l) => scale(&a, inv_mod(l, p).expect("nonzero"), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FPoly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &[u64], p: u64) -> FPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect())
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> FPoly {
    let mut base = rem(a, m, p);
    let mut acc: FPoly = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(&base, &base, m, p);
        }
    }
    acc
}

/// Evaluate at a point of F_p.
pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Rabin's irreducibility test for a polynomial of degree ≥ 1.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = monic(f, p);
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x: FPoly = vec![0, 1];
    let xpn = powmod(&x, (p as u128).pow(n as u32), &f, p);
    if !sub(&xpn, &x, p).is_empty() {
        return false;
    }
    for q in prime_factors(n as u64) {
        let e = (p as u128).pow((n as u64 / q) as u32);
        let h = sub(&powmod(&x, e, &f, p), &x, p);
        if gcd(&f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Factor a monic squarefree polynomial into monic irreducibles
/// (distinct-degree then Cantor–Zassenhaus equal-degree splitting), sorted.
pub fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<FPoly> {
    let f = monic(f, p);
    let mut out = Vec::new();
    let x: FPoly = vec![0, 1];
    let mut rest = f.clone();
    let mut xp = x.clone();
    let mut d = 0usize;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        xp = powmod(&xp, p as u128, &rest, p);
        let g = gcd(&rest, &sub(&xp, &x, p), p);
        if g.len() > 1 {
            out.extend(equal_degree(&g, d, p, rng));
            rest = divrem(&rest, &g, p).0;
            xp = rem(&xp, &rest, p);
        }
    }
    out.sort();
    out
}

fn equal_degree<R: Rng>(f: &[u64], d: usize, p: u64, rng: &mut R) -> Vec<FPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a: FPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let g0 = gcd(f, &a, p);
        let split = if g0.len() > 1 {
            g0
        } else {
            let b = sub(&half_power(&a, d, f, p), &[1], p);
            gcd(f, &b, p)
        };
        if split.len() > 1 && split.len() < f.len() {
            let other = divrem(f, &split, p).0;
            let mut v = equal_degree(&split, d, p, rng);
            v.extend(equal_degree(&monic(&other, p), d, p, rng));
            return v;
        }
    }
}

/// `a^{(p^d − 1)/2} mod f`, computed as `(a·a^p·…·a^{p^{d−1}})^{(p−1)/2}`
/// so the exponent never leaves word size.
fn half_power(a: &[u64], d: usize, f: &[u64], p: u64) -> FPoly {
    let mut frob = rem(a, f, p);
    let mut prod = frob.clone();
    for _ in 1..d {
        frob = powmod(&frob, p as u128, f, p);
        prod = mulmod(&prod, &frob, f, p);
    }
    powmod(&prod, ((p - 1) / 2) as u128, f, p)
}

/// Roots in F_p of a nonzero polynomial, sorted.
pub fn roots<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<u64> {
    let f = monic(f, p);
    if f.len() <= 1 {
        return Vec::new();
    }
    let x: FPoly = vec![0, 1];
    let g = gcd(&f, &sub(&powmod(&x, p as u128, &f, p), &x, p), p);
    if g.len() <= 1 {
        return Vec::new();
    }
    let mut r: Vec<u64> = equal_degree(&g, 1, p, rng).into_iter().map(|h| (p - h[0]) % p).collect();
    r.sort();
    r
}

/// `(g, s, t)` with `g = gcd(a, b)` monic and `s·a + t·b = g`.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (FPoly, FPoly, FPoly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1): (FPoly, FPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FPoly, FPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&l) => {
            let inv = inv_mod(l, p).expect("nonzero");
            (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
        }
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_modulo(a: &[u64], m: &[u64], p: u64) -> Option<FPoly> {
    let (g, s, _) = ext_gcd(&rem(a, m, p), m, p);
    (g == vec![1]).then(|| rem(&s, m, p))
}
