use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The line is not well-formed JSON.
    #[error("malformed JSON ({message}) in line: {context}")]
    Parse { message: String, context: String },

    /// Well-formed JSON that does not match the expected schema.
    #[error("schema violation: {0}")]
    Schema(String),

    /// A span violates its offset or surface invariants.
    #[error("span violation: {0}")]
    Span(String),

    /// A corruption rule was asked to run on a record it cannot apply to.
    #[error("corruption rule not applicable: {0}")]
    Inapplicable(String),

    /// A corruption record does not match the summary it is applied to.
    #[error("corruption record mismatch: {0}")]
    Mismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("external corrector failed ({status}): {stderr}")]
    External { status: String, stderr: String },

    #[error("external corrector protocol violation: {0}")]
    Protocol(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Wraps another error with the 1-based line number it came from.
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping line-number wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for errors caused by bad invocation rather than bad data.
    pub fn is_usage(&self) -> bool {
        matches!(self.root(), Error::Usage(_) | Error::Config(_))
    }
}
