use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Rational, Scalar};

/// A number field with an explicit Q-basis, used where exact arithmetic has
/// to be mirrored modulo prime powers (kernel reconstruction) or evaluated in
/// floating point.
pub trait NumberField: Scalar {
    fn degree(&self) -> usize;
    /// Rational coordinates in the fixed basis.
    fn coords(&self) -> Vec<Rational>;
    fn from_coords(&self, c: &[Rational]) -> Self;
    /// All ring maps into `Z/p^k`, each given by the images of the basis
    /// elements. `None` unless `p` splits completely.
    fn embeddings(&self, p: u64, k: u32) -> Option<Vec<Vec<BigInt>>>;
    /// Value under the embedding sending every radicand's root to the
    /// positive real root; `None` when the element is not real there.
    fn approx_real(&self) -> Option<f64>;
    /// The automorphism fixing the base of the outermost quadratic layer.
    fn top_conj(&self) -> Self;
}

impl NumberField for Rational {
    fn degree(&self) -> usize {
        1
    }
    fn coords(&self) -> Vec<Rational> {
        vec![self.clone()]
    }
    fn from_coords(&self, c: &[Rational]) -> Self {
        c[0].clone()
    }
    fn embeddings(&self, _p: u64, _k: u32) -> Option<Vec<Vec<BigInt>>> {
        Some(vec![vec![BigInt::from(1)]])
    }
    fn approx_real(&self) -> Option<f64> {
        rational_to_f64(self)
    }
    fn top_conj(&self) -> Self {
        self.clone()
    }
}

/// Nearest double to a rational, robust to huge numerators and denominators.
pub fn rational_to_f64(x: &Rational) -> Option<f64> {
    let n = x.numer();
    let d = x.denom();
    let shift = (n.bits() as i64 - d.bits() as i64 - 60).max(-1070);
    let scaled = if shift >= 0 { n / (d << (shift as usize)) } else { (n << ((-shift) as usize)) / d };
    Some(scaled.to_f64()? * 2f64.powi(shift as i32))
}
