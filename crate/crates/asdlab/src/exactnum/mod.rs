//! Exact arithmetic: rationals, quadratic fields and towers, residue rings,
//! finite fields, truncated p-adic numbers and quadratic symbols.

pub mod field;
pub mod fp;
pub mod fpoly;
pub mod fq;
pub mod padic;
pub mod quad;
pub mod rational;
pub mod scalar;
pub mod symbols;
pub mod zmod;

pub use field::{rational_to_f64, NumberField};
pub use fq::{FqElem, FqField};
pub use padic::{embed_quad, gamma_p, hensel_sqrt, morita_gamma, nth_root_one_mod_p, unit_root, PadicNum};
pub use quad::{Quad, QuadElem};
pub use rational::{format_rational, int_valuation, parse_rational, rat, rat_int, rational_mod, valuation, Rational};
pub use scalar::Scalar;
pub use symbols::kronecker;
pub use zmod::{Zmod64, ZmodBig, ZMOD64_LIMIT};
