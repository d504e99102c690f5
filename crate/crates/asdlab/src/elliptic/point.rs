use super::curve::ShortCurve;
use crate::exactnum::Scalar;

/// A point on a short curve; `None` is the point at infinity.
pub type Point<K> = Option<(K, K)>;

impl<K: Scalar> ShortCurve<K> {
    pub fn is_on_curve(&self, p: &Point<K>) -> bool {
        match p {
            None => true,
            Some((x, y)) => y.times(y) == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point<K>) -> Point<K> {
        p.as_ref().map(|(x, y)| (x.clone(), y.negated()))
    }

    pub fn add(&self, p: &Point<K>, q: &Point<K>) -> Point<K> {
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return if p.is_none() { q.clone() } else { p.clone() };
        };
        let slope = if x1 == x2 {
            if y1.plus(y2).is_zero() {
                return None;
            }
            x1.times(x1).times_int(3).plus(&self.a).times(&y1.times_int(2).try_inv()?)
        } else {
            y2.minus(y1).times(&x2.minus(x1).try_inv()?)
        };
        let x3 = slope.times(&slope).minus(x1).minus(x2);
        let y3 = slope.times(&x1.minus(&x3)).minus(y1);
        Some((x3, y3))
    }

    /// `[n]P` by double-and-add.
    pub fn mul(&self, n: i64, p: &Point<K>) -> Point<K> {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Order of `p`, if at most `limit`.
    pub fn order(&self, p: &Point<K>, limit: u64) -> Option<u64> {
        let mut q = p.clone();
        for n in 1..=limit {
            if q.is_none() {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }
}
