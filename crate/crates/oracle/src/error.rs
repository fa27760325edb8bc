use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("resource bound exceeded: {0}")]
    Resource(String),

    /// A verified prediction failed; carries enough context to identify
    /// the offending label or character.
    #[error("verification failure: {0}")]
    Verification(String),

    /// Internal consistency failure that must never occur on valid input.
    #[error("tripwire: {0}")]
    Tripwire(String),

    #[error(transparent)]
    Core(#[from] slchar_core::CoreError),

    #[error("cache i/o: {0}")]
    Cache(String),
}

pub type OracleResult<T> = Result<T, OracleError>;
