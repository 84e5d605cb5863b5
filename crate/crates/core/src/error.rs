use thiserror::Error;

use crate::logic::Atom;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the engine, the decider and the file formats.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
        /// The offending source line followed by a caret line.
        excerpt: String,
    },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("trigger ({rule}, {substitution}) is not a body embedding into the current factbase")]
    UnknownTrigger { rule: String, substitution: String },

    #[error("trigger ({rule}, {substitution}) is not {variant}-applicable")]
    NotApplicable {
        rule: String,
        substitution: String,
        variant: String,
    },

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("`{0}` does not occur in the derivation")]
    UnknownTarget(String),

    #[error("atom {0} is not part of the initial factbase")]
    KeepNotSubset(Atom),

    #[error("operation not supported for the {0} chase")]
    VariantUnsupported(String),

    #[error("budget exceeded: {reason}")]
    BudgetExceeded {
        reason: String,
        factbases_examined: u64,
        derivations_examined: u64,
    },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("unsupported trace format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("replay failed at step {step}: {reason}")]
    ReplayFailure { step: usize, reason: String },

    #[error("malformed document: {0}")]
    Format(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
