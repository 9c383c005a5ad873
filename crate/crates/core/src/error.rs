use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A word or argument that does not fit the operation's contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Group, subgroup, rules or run configuration that cannot be used.
    #[error("configuration error: {0}")]
    Config(String),

    /// An element, pair or step budget was exhausted before the result was complete.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// The requested radius lies outside the certified region of the atlas.
    #[error("needs larger radius: {what} requires an atlas radius of at least {required} (have {available})")]
    NeedsLargerRadius {
        what: String,
        required: u32,
        available: u32,
    },

    #[error("atlas file {path}: {reason}")]
    AtlasFormat { path: PathBuf, reason: String },

    #[error("atlas file {path}: format version {found}, this reader understands version {expected}")]
    AtlasVersion { path: PathBuf, found: u32, expected: u32 },

    #[error("atlas file {path}: checksum mismatch")]
    AtlasChecksum { path: PathBuf },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn needs_radius(what: impl Into<String>, required: u32, available: u32) -> Self {
        Error::NeedsLargerRadius {
            what: what.into(),
            required,
            available,
        }
    }

    /// Process exit code for this error class: 3 for budget or feasibility
    /// problems, 4 for configuration and input problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) | Error::NeedsLargerRadius { .. } => 3,
            _ => 4,
        }
    }
}
