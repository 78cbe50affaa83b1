//! Crate-wide error type and the exit-code contract of the CLI.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Classifies ensemble / protocol file parse failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Structural problem: unknown directive, malformed token, bad literal.
    Syntax,
    /// Norm or prior sum deviates from 1 by more than the file tolerance.
    Norm,
    /// Amplitude count does not match the declared dimensions.
    Dims,
    /// A label was declared twice.
    DuplicateLabel,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self {
            ParseErrorKind::Syntax => "E_SYNTAX",
            ParseErrorKind::Norm => "E_NORM",
            ParseErrorKind::Dims => "E_DIMS",
            ParseErrorKind::DuplicateLabel => "E_DUP",
        };
        f.write_str(tag)
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A vector or matrix violates a state invariant (normalisation,
    /// Hermiticity, positivity, unit trace, finiteness, dimension cap).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A Kraus set violates an operation invariant (shape, finiteness,
    /// trace-non-increase, instrument completeness).
    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    /// A protocol tree is malformed (uncovered outcomes, depth, local dims).
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    /// The inputs do not satisfy an operation's precondition.
    #[error("E_PRECOND: {0}")]
    Precondition(String),

    #[error("{kind} at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        kind: ParseErrorKind,
        msg: String,
    },

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, kind: ParseErrorKind, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            kind,
            msg: msg.into(),
        }
    }

    /// Process exit code for the CLI: 2 parse error, 3 precondition
    /// violation, 4 internal invariant breach. Successful commands exit 0.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Internal(_) => 4,
            _ => 3,
        }
    }
}
