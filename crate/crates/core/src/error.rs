//! Crate-wide error type.
//!
//! Errors fall into two broad classes that callers (notably the CLI) care
//! about: input/configuration problems, and statistics that are genuinely
//! undefined for the given data. Undefined statistics are always signaled,
//! never silently returned as 0.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed record in a line-delimited input stream.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Two records claim the same post id within one corpus file.
    #[error("duplicate post id `{id}` at line {line}")]
    DuplicateId { id: String, line: usize },

    /// Invalid configuration detected at load time (bad regex, bad bounds).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Structurally invalid input data (shape, range, emptiness).
    #[error("invalid input: {0}")]
    Input(String),

    /// Two post-indexed datasets do not cover the same posts.
    #[error("post sets are misaligned: {0}")]
    Alignment(String),

    /// A statistic whose defining ratio is degenerate for this data.
    #[error("undefined statistic: {0}")]
    Undefined(String),

    /// Matrix/vector dimensions do not match.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}: {message}")]
    Divergence { epoch: usize, message: String },

    /// The annotation provider failed after retries or returned garbage.
    #[error("annotation provider error: {0}")]
    Provider(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors of the "undefined statistic / numerical" class, which
    /// the CLI maps to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Undefined(_) | Error::Divergence { .. })
    }
}
