//! Truncated Laurent–Puiseux series in `q^{1/μ}` with exact coefficients.

mod cache;
mod series;

pub use cache::{read_cache, write_cache, CacheFile};
pub use series::{divisor_series, prod_expand, QSeries};
