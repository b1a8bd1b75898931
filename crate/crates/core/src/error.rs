use thiserror::Error;

/// Errors raised by the library. Mathematical "unknown" outcomes are not
/// errors; they travel in-band inside result values.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero has no factorization")]
    ZeroInput,

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("modulus {0} exceeds the supported word-size prime range")]
    ModulusTooLarge(String),

    #[error("polynomial is constant; operation needs degree >= 1")]
    ConstantPolynomial,

    #[error("polynomial {0} is not squarefree")]
    NotSquarefree(String),

    #[error("polynomial {0} is reducible over the rationals")]
    Reducible(String),

    #[error("polynomial {0} must be monic with integer coefficients")]
    NotMonicIntegral(String),

    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate fiber: g({0}) = 0")]
    DegenerateFiber(String),

    #[error("cannot factor {0} within the effort budget")]
    Unfactored(String),

    #[error("prime {p} divides the index of Z[theta]; splitting unsupported")]
    IndexDividingPrime { p: String },

    #[error("ideal arithmetic across different fields")]
    FieldMismatch,

    #[error("all generators are zero")]
    ZeroIdeal,

    #[error("{0} is not a fundamental discriminant (conductor {1})")]
    NotFundamental(String, String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("prime {0} is beyond the configured bound {1}")]
    OutOfRange(u64, u64),

    #[error("computation incomplete: {0}")]
    Incomplete(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
