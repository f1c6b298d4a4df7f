use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("n = {0} is out of range (closed forms require n >= 5)")]
    OutOfRange(u64),

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("prime mismatch: profile at p = {profile}, filtration at p = {filtration}")]
    PrimeMismatch { profile: u64, filtration: u64 },

    #[error("{p} does not divide the critical group order for n = {n}")]
    PrimeDoesNotDivide { n: u64, p: u64 },

    #[error("inconsistent hypothesis: {0}")]
    InconsistentHypothesis(String),

    /// A branch of the case analysis that is provably impossible was selected,
    /// or the guards did not select exactly one branch.
    #[error("case dispatch failure: {0}")]
    Dispatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
