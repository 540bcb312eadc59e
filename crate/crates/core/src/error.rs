//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent parameters (non-prime p, bad dimensions, ...).
    #[error("invalid parameter: {0}")]
    Param(String),

    /// Matrix/vector shape mismatch.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// No codeword within the correction radius of the received word.
    #[error("decoding failed: no codeword within the correction radius")]
    DecodeFailure,

    /// An inhomogeneous linear system has no solution.
    #[error("linear system has no solution")]
    NoSolution,

    /// The stabilizer-triviality filter did not find an acceptable subcode.
    #[error("stabilizer filter exhausted its retry budget of {0} attempts")]
    FilterExhausted(usize),

    /// Malformed serialized data.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
