use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cardinality: k={k} with universe n={n} (need k <= n <= 63)")]
    InvalidCardinality { n: usize, k: usize },

    #[error("index {index} out of range for universe of size {size}")]
    OutOfRange { index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("size {n} exceeds the cap of {cap}")]
    SizeExceeded { n: usize, cap: usize },

    #[error("cardinality mismatch: |rows|={rows}, |cols|={cols}")]
    CardinalityMismatch { rows: usize, cols: usize },

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("work budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("modulus pattern violated at row {row}, column {col}")]
    ModulusPattern { row: usize, col: usize },

    #[error("entry ({row}, {col}) is not 0 or 1")]
    NonBinary { row: usize, col: usize },

    #[error("entry ({row}, {col}) is zero (modulus <= tolerance)")]
    ZeroEntry { row: usize, col: usize },

    #[error("degree mismatch: exponent total {total}, expected {expected}")]
    DegreeMismatch { total: usize, expected: usize },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("unknown ensemble `{0}`")]
    UnknownEnsemble(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeExceeded { .. } | Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}
