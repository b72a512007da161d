use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two graphs (or a graph and a probability matrix) disagree on the vertex count.
    #[error("vertex count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// An exhaustive enumeration was requested beyond the supported cap.
    #[error("{what} is capped at n <= {max_n} (2^(n(n-1)/2) graphs), got n = {n}")]
    Budget {
        what: &'static str,
        n: usize,
        max_n: usize,
    },

    /// Dense pair-pair correlation storage refused beyond the guard.
    #[error("sample correlation storage is guarded at n <= {max_n}, got n = {n}")]
    MemoryGuard { n: usize, max_n: usize },

    /// An edge probability outside [0, 1].
    #[error("edge probability {value} for pair ({i},{j}) is outside [0, 1]")]
    InvalidProbability { i: usize, j: usize, value: f64 },

    /// Beta shapes must both be positive.
    #[error("beta shapes must be positive, got nu = {nu}, omega = {omega}")]
    InvalidBetaShape { nu: f64, omega: f64 },

    /// A sample of graphs must contain at least one graph.
    #[error("graph sample is empty")]
    EmptySample,

    /// A vertex pair outside 1 <= i < j <= n.
    #[error("invalid vertex pair ({i},{j}) for n = {n}")]
    InvalidPair { i: usize, j: usize, n: usize },

    /// An experiment configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A text fixture (graph or probability matrix) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by exceeding an enumeration or memory cap,
    /// as opposed to malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::MemoryGuard { .. })
    }
}
