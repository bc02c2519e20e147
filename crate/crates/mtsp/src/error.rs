use std::io;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad user input: invalid parameters, malformed region, unknown option.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The instance cannot be solved under the requested policy.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Malformed instance or solution document.
    #[error("parse error: {0}")]
    Parse(String),
    /// A resource budget would be exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// The wall-clock budget ran out at an iteration boundary.
    #[error("timeout after {elapsed_s:.3}s ({iterations} iterations)")]
    Timeout {
        elapsed_s: f64,
        iterations: usize,
        evaluation_calls: u64,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
