use thiserror::Error;

use crate::model::{AgentId, Model};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("agent {0} is not a member of both coalitions")]
    NotAMember(AgentId),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("algorithm requires model {expected}, got {found}")]
    ModelMismatch { expected: Model, found: Model },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shortcut not applicable: {0}")]
    NotApplicable(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_model(found: Model, expected: Model) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::ModelMismatch { expected, found })
    }
}
