use thiserror::Error;

use crate::hypercore::ConfigurationWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An input violated a documented precondition; the witness shows why.
    #[error("precondition violated: {message}")]
    Precondition {
        message: String,
        witness: Option<ConfigurationWitness>,
    },

    #[error("gadget is not eligible for k = {k}: {reason}")]
    Ineligible { k: usize, reason: String },

    #[error("search guard exceeded: {0}")]
    Guard(String),

    /// A state that valid inputs can never reach. Always a bug or a
    /// precondition breach that slipped through.
    #[error("internal error: {message}")]
    Internal {
        message: String,
        witness: Option<ConfigurationWitness>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    /// Short machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Param(_) => "param",
            Error::Parse { .. } => "parse",
            Error::Precondition { .. } => "precondition",
            Error::Ineligible { .. } => "ineligible",
            Error::Guard(_) => "guard",
            Error::Internal { .. } => "internal",
            Error::Io(_) => "io",
        }
    }

    pub fn witness(&self) -> Option<&ConfigurationWitness> {
        match self {
            Error::Precondition { witness, .. } | Error::Internal { witness, .. } => {
                witness.as_ref()
            }
            _ => None,
        }
    }
}
