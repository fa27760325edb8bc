use thiserror::Error;

/// Errors surfaced by the label-combinatorics layer.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Desk-scale enumeration guard tripped (`n`/`dmax` too large or the
    /// orbit/label count would be astronomical).
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("cyclic modulus mismatch: value has modulus {found}, expected {expected}")]
    ModulusMismatch { expected: u64, found: u64 },

    /// An internal consistency assertion failed.  These indicate that two
    /// design rules disagree and must never fire on valid inputs.
    #[error("tripwire: {0}")]
    Tripwire(String),

    #[error("malformed label: {0}")]
    MalformedLabel(String),
}

pub type CoreResult<T> = Result<T, CoreError>;
