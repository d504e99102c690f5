use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a quadratic residue modulo {1}")]
    NonResidue(String, u64),
    #[error("a_p = {0} is divisible by p = {1}: no unit root")]
    SupersingularInput(i64, u64),
    #[error("no solution congruent to 1 mod {0}")]
    NoSolution(u64),
    #[error("leading coefficient is not invertible")]
    NonUnitLeading,
    #[error("grading {0} is not compatible with grading {1}")]
    IncompatibleGrading(u32, u32),
    #[error("series is not a square")]
    NotASquare,
    #[error("index {index} is at or beyond the truncation order {trunc}")]
    BeyondTruncation { index: String, trunc: String },
    #[error("exponent {0} is not representable with grading {1}")]
    NonRepresentableIndex(String, u32),
    #[error("pole parameter u = {0} lies at a cusp")]
    PoleAtCuspParameter(String),
    #[error("j = {0} is an elliptic point")]
    SingularJ(String),
    #[error("curve is singular")]
    SingularCurve,
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("model is not integral at p = {0}")]
    NonIntegralModel(u64),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("no kernel found: {0}")]
    NoKernelFound(String),
    #[error("no isogeny of degree {0} returns to the same j-invariant")]
    NotAnEndomorphism(u64),
    #[error("endomorphism matrix has a repeated eigenvalue")]
    RepeatedEigenvalues,
    #[error("value {0} is not within tolerance of an integer")]
    NotNearInteger(String),
    #[error("series parameter outside the disc of convergence: {0}")]
    DivergentParameter(String),
    #[error("coefficient {needed} needed but only {available} available")]
    InsufficientCoefficients { needed: u64, available: u64 },
    #[error("coefficient at index {0} is not integral at p = {1}")]
    NonIntegralAtP(u64, u64),
    #[error("{0} is not an element of the coefficient ring")]
    NotInRing(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
