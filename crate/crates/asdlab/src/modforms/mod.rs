//! Concrete modular forms as exact q-expansions.

mod catalog;
mod form_id;
mod identities;
mod mero;

pub use catalog::*;
pub use form_id::{build, FormId, FormStore};
pub use identities::{identity_sides, verify_identity, Identity};
pub use mero::*;

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, Rational, Scalar};

/// The image of a rational number in the coefficient ring.
pub fn lift<S: Scalar>(zero: &S, q: &Rational) -> Result<S> {
    zero.from_rational_like(q).ok_or_else(|| Error::NotInRing(format_rational(q)))
}
