use thiserror::Error;

use crate::poly::Poly;

/// Errors raised by the algebraic layer and the p-curvature drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("operands belong to different rings")]
    RingMismatch,

    /// An element of a quotient ring `F_p[x]/S` shares the factor `gcd` with `S`.
    #[error("element is not invertible: it shares the factor {gcd} with the modulus")]
    NotInvertible { gcd: Poly },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("moduli are not pairwise coprime")]
    NotCoprime,

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("unsupported degree: {0}")]
    UnsupportedDegree(String),

    #[error("bad precision: {0}")]
    BadPrecision(String),

    #[error("total modulus degree {got} is below the required {needed}")]
    InsufficientModuli { needed: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
