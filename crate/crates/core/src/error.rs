use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a positive non-square discriminant")]
    InvalidDiscriminant(i128),
    #[error("no primitive prime form of discriminant {d} above {p}")]
    NoPrimeForm { d: u64, p: u64 },
    #[error("definite quaternion algebra rejected")]
    DefiniteAlgebra,
    #[error("division by an element of reduced norm zero")]
    ZeroNorm,
    #[error("lattice is not closed under multiplication")]
    NotARing,
    #[error("not integral: {0}")]
    NotIntegral(String),
    #[error("level mismatch: reduced discriminant {found}, expected {expected}")]
    LevelMismatch { found: String, expected: String },
    #[error("gcd({n}, {m}) > 1")]
    GcdViolation { n: u64, m: u64 },
    #[error("norm mismatch: expected {expected}, found {found}")]
    NormMismatch { expected: String, found: String },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("embedding is not optimal: {0}")]
    NotOptimal(String),
    #[error("trace must be zero")]
    BadTrace,
    #[error("degenerate element: reduced norm {0} is not negative")]
    Degenerate(String),
    #[error("embeddings belong to different orders")]
    OrderMismatch,
    #[error("{d} is not {p}-fundamental")]
    NotPFundamental { d: u64, p: u64 },
    #[error("neighbor outside the computed levels")]
    OutsideLevels,
    #[error("embeddings are not transversal")]
    NonTransversal,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
