use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exactnum::fp::is_prime;
use crate::exactnum::{embed_quad, kronecker, rational_mod, QuadElem};

/// Coefficients `A_0, …, A_{k−1}` (ascending powers of `T`) of
/// `Π_{j=0}^{k−2} (T − p^r·α^j·β^{k−2−j})`, where `α, β` are the roots of
/// `T² − t_r·T + p^r` and `t_r = α^r + β^r` is the Frobenius trace over
/// `F_{p^r}` built from `a_p`.
pub type PoleFactor = Vec<BigInt>;

pub fn pole_factor(k: u32, p: u64, r: u32, a_p: i64) -> PoleFactor {
    assert!(k >= 2, "weight must be at least 2");
    let n = (k - 2) as usize;
    let pb = BigInt::from(p);
    let q = pb.pow(r);
    // t_j = α^j + β^j for the Frobenius over F_p, then over F_{p^r}.
    let traces = |a: &BigInt, norm: &BigInt, upto: usize| -> Vec<BigInt> {
        let mut t = vec![BigInt::from(2), a.clone()];
        while t.len() <= upto {
            let l = t.len();
            t.push(a * &t[l - 1] - norm * &t[l - 2]);
        }
        t
    };
    let t_r = traces(&BigInt::from(a_p), &pb, r as usize)[r as usize].clone();
    let s = traces(&t_r, &q, n + 1);
    // Power sums P_m = Σ_j (α^j β^{n−j})^m = h_n(α^m, β^m), where
    // h_i(x, y) = (x+y)·h_{i−1} − xy·h_{i−2}.
    let power_sum = |m: usize| -> BigInt {
        let (sum, prod) = (&s[m], q.pow(m as u32));
        let (mut h0, mut h1) = (BigInt::from(1), sum.clone());
        if n == 0 {
            return h0;
        }
        for _ in 1..n {
            let h2 = sum * &h1 - &prod * &h0;
            h0 = h1;
            h1 = h2;
        }
        h1
    };
    let big_p: Vec<BigInt> = (0..=n + 1).map(|m| if m == 0 { BigInt::zero() } else { power_sum(m) }).collect();
    // Newton: i·e_i = Σ_{l=1}^{i} (−1)^{l−1} e_{i−l} P_l.
    let mut e = vec![BigInt::from(1)];
    for i in 1..=n + 1 {
        let mut acc = BigInt::zero();
        for l in 1..=i {
            let term = &e[i - l] * &big_p[l];
            if l % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quo, rem) = acc.div_rem(&BigInt::from(i));
        debug_assert!(rem.is_zero(), "Newton identity division is exact");
        e.push(quo);
    }
    // Roots are q·ρ_j, so the coefficient of T^{n+1−i} is (−1)^i e_i q^i.
    let mut coeffs = vec![BigInt::zero(); n + 2];
    for (i, ei) in e.iter().enumerate() {
        let c = ei * q.pow(i as u32);
        coeffs[n + 1 - i] = if i % 2 == 1 { -c } else { c };
    }
    coeffs
}

/// `ord_p(n!)` by Legendre's formula.
fn factorial_valuation(n: u64, p: u64) -> i64 {
    let mut v = 0;
    let mut q = p;
    while q <= n {
        v += (n / q) as i64;
        match q.checked_mul(p) {
            Some(x) => q = x,
            None => break,
        }
    }
    v
}

/// The shift `j_{f,p}` for a form of weight `k` with a pole of the given
/// order: `k − pole_order` when there are no cusp forms and the pole order is
/// at most `k − 1`, otherwise the conservative `−ord_p((pole_order − 1)!)`.
pub fn j_shift(k: u32, pole_order: u32, dim_sk: u32, p: u64) -> i64 {
    assert!(pole_order >= 1, "pole order must be positive");
    if dim_sk == 0 && pole_order < k {
        k as i64 - pole_order as i64
    } else {
        -factorial_valuation(pole_order as u64 - 1, p)
    }
}

/// Both readings of the second case: `(−ord_p((n−1)!), ord_p((n−1)!))`.
pub fn j_shift_bounds(pole_order: u32, p: u64) -> (i64, i64) {
    let v = factorial_valuation(pole_order.max(1) as u64 - 1, p);
    (-v, v)
}

/// Verdict of the four good-prime clauses, with one reason per failed clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPrime {
    pub good: bool,
    pub reasons: Vec<String>,
}

/// Good-prime test for level data `m_level`, weight `k`, a field of
/// discriminant `disc` (`1` for `Q`) and poles `u` in it.
pub fn is_good_prime(m_level: u64, k: u32, disc: i64, u: &[QuadElem], p: u64) -> GoodPrime {
    let mut reasons = Vec::new();
    if !is_prime(p) {
        return GoodPrime { good: false, reasons: vec![format!("{p} is not prime")] };
    }
    let field_is_q = disc == 1;
    if !field_is_q && disc.rem_euclid(p as i64) == 0 {
        reasons.push(format!("p = {p} ramifies in the field of discriminant {disc}"));
    }
    let split = field_is_q || (p > 2 && kronecker(disc, p as i64) == 1);
    let precision = 2u32;
    let mut residues: Vec<BigInt> = Vec::new();
    for x in u {
        let rational = x.b.is_zero();
        if !rational && !split {
            reasons.push(format!("pole {x} does not embed into Z_{p}: p is not split"));
            continue;
        }
        let coords_integral = [&x.a, &x.b].iter().all(|c| !c.denom().is_multiple_of(&BigInt::from(p)));
        if !coords_integral {
            reasons.push(format!("pole {x} is not {p}-integral"));
            continue;
        }
        let r = if rational {
            rational_mod(&x.a, &BigInt::from(p))
        } else {
            embed_quad(x, p, precision).ok().and_then(|v| v.residue(1))
        };
        match r {
            Some(r) => residues.push(r),
            None => reasons.push(format!("pole {x} has no reduction modulo {p}")),
        }
    }
    let mut sorted = residues.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < residues.len() {
        reasons.push(format!("two poles have the same reduction modulo {p}"));
    }
    let divides = (2 * m_level) % p == 0 || factorial_valuation(k.saturating_sub(2) as u64, p) > 0;
    if divides {
        reasons.push(format!("p = {p} divides 2·M·(k−2)! = 2·{m_level}·{}!", k.saturating_sub(2)));
    }
    GoodPrime { good: reasons.is_empty(), reasons }
}
