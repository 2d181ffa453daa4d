//! Error taxonomy shared by the whole crate.

use thiserror::Error;

/// Errors produced by hypergraph construction, metrics, and the pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition (bad id, bad range, length mismatch).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Conductance is undefined for this node set (empty, full, or zero min-volume).
    #[error("undefined conductance: {0}")]
    UndefinedConductance(String),

    /// Local conductance has a zero denominator.
    #[error("undefined local conductance: denominator is zero")]
    UndefinedHlc,

    /// A resistance ratio is undefined because the quadratic form vanishes.
    #[error("undefined resistance ratio: quadratic form is zero")]
    UndefinedRatio,

    /// An input vector or start vector is degenerate (zero).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The Krylov subspace collapsed; no usable embedding vectors remain.
    #[error("degenerate subspace: {0}")]
    DegenerateSubspace(String),

    /// No balanced partition exists under the given constraints.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
