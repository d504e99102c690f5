use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::curve::ShortCurve;
use super::divpoly::{division_xparts, multiplication_x_map};
use super::poly::Poly;
use super::velu::velu_from_poly;
use crate::error::{Error, Result};
use crate::exactnum::fp::is_prime;
use crate::exactnum::fpoly::{self, FPoly};
use crate::exactnum::rational::{mod_inverse, rational_reconstruct};
use crate::exactnum::{rational_mod, NumberField, Rational};

/// Default bound on reconstructed denominators.
pub const DEFAULT_HEIGHT: u64 = 1_000_000;

const RNG_SEED: u64 = 0x6b65726e656c;
const PRIME_SEARCH_LIMIT: u64 = 200_000;

/// All monic degree-`(ℓ−1)/2` kernel polynomials of `ℓ`-isogenies defined over `K`.
pub fn kernel_search<K: NumberField>(curve: &ShortCurve<K>, ell: u32) -> Result<Vec<Poly<K>>> {
    kernel_search_with_height(curve, ell, DEFAULT_HEIGHT)
}

/// [`kernel_search`] with an explicit denominator bound for rational reconstruction.
///
/// Each kernel is found modulo one completely split prime `p` under every
/// embedding `K → Z/p`, Hensel-lifted to `p^k`, recombined across embeddings
/// by solving for basis coordinates, and verified exactly over `K`.
pub fn kernel_search_with_height<K: NumberField>(curve: &ShortCurve<K>, ell: u32, height: u64) -> Result<Vec<Poly<K>>> {
    if ell < 3 || ell > 13 || !is_prime(ell as u64) {
        return Err(Error::Config(format!("kernel search needs an odd prime at most 13, got {ell}")));
    }
    let z = curve.zero_elem();
    let d = ((ell - 1) / 2) as usize;
    let parts = division_xparts(curve, ell + 1);
    let f = parts[ell as usize].monic().expect("field");
    let maps: Vec<(Poly<K>, Poly<K>)> = (1..=d).map(|k| multiplication_x_map(curve, &parts, k)).collect();
    let height_b = BigInt::from(height);
    let num_bound = &height_b * BigInt::from(10u32).pow(60);
    let needed = BigInt::from(2) * &height_b * &num_bound;

    let mut p = 10u64;
    while p < PRIME_SEARCH_LIMIT {
        p += 1;
        if !is_prime(p) || (6 * ell as u64) % p == 0 || z.embeddings(p, 1).is_none() {
            continue;
        }
        let mut k = 1u32;
        while BigInt::from(p).pow(k) < needed {
            k += 1;
        }
        let modulus = BigInt::from(p).pow(k);
        let embs = z.embeddings(p, k).expect("split at p is split at p^k");
        let Some(basis_inv) = invert_mod(&embs, &modulus, p) else { continue };
        let Some(per_embedding) =
            embs.iter().map(|img| kernels_under(&f, &maps, img, p, &modulus, d)).collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let mut found: BTreeMap<String, Poly<K>> = BTreeMap::new();
        for tuple in cartesian(&per_embedding) {
            if let Some(g) = recombine(&z, &tuple, &basis_inv, &modulus, &num_bound, &height_b, d) {
                if f.divrem(&g).is_some_and(|(_, r)| r.is_zero()) && velu_from_poly(curve, &g).is_ok() {
                    found.insert(g.to_string(), g);
                }
            }
        }
        return Ok(found.into_values().collect());
    }
    Err(Error::NoKernelFound(format!("no usable split prime below {PRIME_SEARCH_LIMIT}")))
}

/// Image of `x` under the embedding with basis images `img`, modulo `m`.
fn embed<K: NumberField>(x: &K, img: &[BigInt], m: &BigInt) -> Option<BigInt> {
    let mut acc = BigInt::zero();
    for (c, b) in x.coords().iter().zip(img) {
        acc += rational_mod(c, m)? * b;
    }
    Some(acc.mod_floor(m))
}

fn embed_poly<K: NumberField>(f: &Poly<K>, img: &[BigInt], m: &BigInt) -> Option<Vec<BigInt>> {
    f.coeffs().iter().map(|c| embed(c, img, m)).collect()
}

fn to_fp(v: &[BigInt], p: u64) -> FPoly {
    let pb = BigInt::from(p);
    fpoly::trim(v.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect())
}

/// Kernel polynomials mod `p`, lifted to `modulus`, for one embedding.
/// `None` when the prime is unusable (non-integral or not squarefree).
fn kernels_under<K: NumberField>(
    f: &Poly<K>,
    maps: &[(Poly<K>, Poly<K>)],
    img: &[BigInt],
    p: u64,
    modulus: &BigInt,
    d: usize,
) -> Option<Vec<Vec<BigInt>>> {
    let pb = BigInt::from(p);
    let img_p: Vec<BigInt> = img.iter().map(|b| b.mod_floor(&pb)).collect();
    let f_big = embed_poly(f, img, modulus)?;
    let fp = to_fp(&f_big, p);
    if fpoly::degree(&fp) != f.degree() || fpoly::gcd(&fp, &fpoly::derivative(&fp, p), p) != vec![1] {
        return None;
    }
    let maps_p: Vec<(FPoly, FPoly)> = maps
        .iter()
        .map(|(n, dn)| Some((to_fp(&embed_poly(n, &img_p, &pb)?, p), to_fp(&embed_poly(dn, &img_p, &pb)?, p))))
        .collect::<Option<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    let mut kernels: Vec<FPoly> = Vec::new();
    for h in fpoly::factor_squarefree(&fp, p, &mut rng) {
        let mut xs = Vec::with_capacity(d);
        for (n, dn) in &maps_p {
            let Some(inv) = fpoly::inv_modulo(dn, &h, p) else { break };
            xs.push(fpoly::mulmod(n, &inv, &h, p));
        }
        if xs.len() != d {
            continue;
        }
        // Π (T − X_k) with coefficients in F_p[x]/(h).
        let mut g: Vec<FPoly> = vec![vec![1]];
        for xk in &xs {
            let mut next: Vec<FPoly> = vec![Vec::new(); g.len() + 1];
            for (i, c) in g.iter().enumerate() {
                next[i + 1] = fpoly::add(&next[i + 1], c, p);
                next[i] = fpoly::sub(&next[i], &fpoly::mulmod(c, xk, &h, p), p);
            }
            g = next;
        }
        if g.iter().all(|c| c.len() <= 1) {
            let g0: FPoly = g.iter().map(|c| c.first().copied().unwrap_or(0)).collect();
            if !kernels.contains(&g0) {
                kernels.push(g0);
            }
        }
    }
    kernels.sort();
    kernels.iter().map(|g0| hensel_lift(&f_big, g0, p, modulus)).collect()
}

fn big_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

fn big_axpy(a: &[BigInt], scale: &BigInt, b: &[u64], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).map(|&v| BigInt::from(v)).unwrap_or_default();
            (x + scale * y).mod_floor(m)
        })
        .collect()
}

/// Lift a monic factor `g0` of `f mod p` to a factor of `f mod modulus`.
fn hensel_lift(f: &[BigInt], g0: &FPoly, p: u64, modulus: &BigInt) -> Option<Vec<BigInt>> {
    let fp = to_fp(f, p);
    let (h0, r) = fpoly::divrem(&fp, g0, p);
    if !r.is_empty() {
        return None;
    }
    let (one, _s, t) = fpoly::ext_gcd(g0, &h0, p);
    if one != vec![1] {
        return None;
    }
    let pb = BigInt::from(p);
    let mut g: Vec<BigInt> = g0.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: Vec<BigInt> = h0.iter().map(|&c| BigInt::from(c)).collect();
    let mut pj = pb.clone();
    while &pj < modulus {
        let gh = big_mul(&g, &h, modulus);
        let n = f.len().max(gh.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| {
                (f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default()).mod_floor(modulus)
            })
            .collect();
        let e: FPoly = fpoly::trim(diff.iter().map(|c| (c / &pj).mod_floor(&pb).to_u64().expect("reduced")).collect());
        let g1 = fpoly::rem(&fpoly::mul(&t, &e, p), g0, p);
        let (h1, r) = fpoly::divrem(&fpoly::sub(&e, &fpoly::mul(&g1, &h0, p), p), g0, p);
        debug_assert!(r.is_empty());
        g = big_axpy(&g, &pj, &g1, modulus);
        h = big_axpy(&h, &pj, &h1, modulus);
        pj *= &pb;
    }
    g.resize(g0.len(), BigInt::zero());
    Some(g)
}

/// Inverse of the matrix `V[e][i] = σ_e(b_i)` modulo `m = p^k`.
fn invert_mod(v: &[Vec<BigInt>], m: &BigInt, p: u64) -> Option<Vec<Vec<BigInt>>> {
    let n = v.len();
    if v.iter().any(|row| row.len() != n) {
        return None;
    }
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<BigInt>> = v
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].mod_floor(&pb).is_zero())?;
        a.swap(col, piv);
        let inv = mod_inverse(&a[col][col], m)?;
        for x in a[col].iter_mut() {
            *x = (&*x * &inv).mod_floor(m);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let c = a[r][col].clone();
                for j in 0..2 * n {
                    let sub = &c * &a[col][j];
                    a[r][j] = (&a[r][j] - sub).mod_floor(m);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// Solve for basis coordinates of each coefficient and reconstruct rationals.
fn recombine<K: NumberField>(
    zero: &K,
    tuple: &[Vec<BigInt>],
    basis_inv: &[Vec<BigInt>],
    m: &BigInt,
    num_bound: &BigInt,
    den_bound: &BigInt,
    d: usize,
) -> Option<Poly<K>> {
    let mut coeffs = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut coords: Vec<Rational> = Vec::with_capacity(basis_inv.len());
        for row in basis_inv {
            let r = row.iter().zip(tuple).fold(BigInt::zero(), |acc, (a, g)| acc + a * &g[j]).mod_floor(m);
            coords.push(rational_reconstruct(&r, m, num_bound, den_bound)?);
        }
        coeffs.push(zero.from_coords(&coords));
    }
    Some(Poly::new(zero, coeffs))
}
