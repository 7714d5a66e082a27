use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong lengths, non-interlacing arguments, bad flags.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Parameters outside the admissible region, e.g. `t` not in (0,1).
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// A series or product that does not converge at the requested point.
    #[error("divergent expression: {0}")]
    Divergence(String),
    /// A size or iteration cap was hit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Data failed a validity check (e.g. a trajectory that is not a Q-chain).
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
