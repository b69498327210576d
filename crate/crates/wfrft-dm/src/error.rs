//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a basic precondition (empty sequence, dimension
    /// mismatch, nonpositive power, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An element or carrier index was outside the array geometry.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A configuration value violated a hard constraint.
    #[error("configuration error: {0}")]
    Config(String),

    /// The receiver geometry makes the Gram system too ill-conditioned to
    /// zero-force. Reports the most coherent pair of steering-matrix columns.
    #[error(
        "ill-conditioned geometry: Gram condition {condition:.3e} exceeds {limit:.3e} \
         (columns {col_a} and {col_b} are nearly coincident)"
    )]
    IllConditionedGeometry {
        condition: f64,
        limit: f64,
        col_a: usize,
        col_b: usize,
    },

    /// The steering matrix spans the whole array space, leaving no null
    /// space for artificial noise.
    #[error("degenerate baseline: steering matrix has no null space (K = array dimension)")]
    DegenerateBaseline,

    /// A bit or sample stream did not divide into whole symbols or blocks.
    #[error("framing error: {0}")]
    Framing(String),

    /// Config file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
