//! Exact q-series, elliptic curves and p-adic arithmetic for checking
//! Atkin–Swinnerton-Dyer type congruences of meromorphic modular forms.

pub mod asdcheck;
pub mod elliptic;
pub mod error;
pub mod exactnum;
pub mod modforms;
pub mod qseries;

pub use error::{Error, Result};

/// The book chapters, compiled as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    struct ExactArithmetic;
    #[doc = include_str!("../../../book/src/qseries.md")]
    struct QSeriesChapter;
    #[doc = include_str!("../../../book/src/modular-forms.md")]
    struct ModularForms;
    #[doc = include_str!("../../../book/src/elliptic-curves.md")]
    struct EllipticCurves;
    #[doc = include_str!("../../../book/src/congruences.md")]
    struct Congruences;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
