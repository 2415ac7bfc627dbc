use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation above cardinality: {total} exceeds eventual value {eventual}")]
    TruncationAboveCardinality { total: i64, eventual: i64 },

    #[error("not an O-sequence: growth bound violated from degree {degree} to {next_degree} ({value} -> {next}, bound {bound})", next_degree = degree + 1)]
    NotOSequence {
        degree: usize,
        value: i64,
        next: i64,
        bound: String,
    },

    #[error("not maximal: growth from degree {degree} is {next}, bound is {bound}")]
    NotMaximal {
        degree: usize,
        next: i64,
        bound: String,
    },

    #[error("inconsistent exponent lengths: expected {expected}, found {found}")]
    ExponentLength { expected: usize, found: usize },

    #[error("Eliahou-Kervaire requires stable ideal")]
    NotStable,

    #[error("ideal is not Artinian: no pure power of variable {variable}")]
    NotArtinian { variable: usize },

    #[error("generic choice unstable; raise confirmations ({0})")]
    GenericUnstable(String),

    #[error("dimension too large or cap too low: no vanishing below degree {cap}")]
    NoVanishing { cap: usize },

    #[error("cap exceeded: ideal is zero through degree {cap}")]
    CapExceeded { cap: usize },

    #[error("range too small or not yet polynomial: {0}")]
    NoPolynomialFit(String),

    #[error("exhaustive UPP scan over {size} points exceeds cap {cap}")]
    UppCapExceeded { size: usize, cap: usize },

    #[error("invalid point set: {0}")]
    InvalidPoints(String),

    #[error("invalid prime field: {0}")]
    InvalidPrime(String),

    #[error("inconsistent diagnosis input: {0}")]
    InconsistentInput(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}
