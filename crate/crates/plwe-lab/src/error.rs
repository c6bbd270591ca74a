use thiserror::Error;

/// Errors surfaced by the toolkit.
///
/// The CLI maps these onto exit codes: input/precondition problems exit 2,
/// capacity refusals exit 3, numeric failures exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the operation's domain (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition does not hold for the given inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is well-formed but too large for exact/desk-scale
    /// treatment. The message names a workable alternative.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A floating-point pipeline failed to converge or hit an
    /// ill-conditioned instance.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A bounded search ran out of budget without finding a result.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    /// Malformed file or expression input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
