use thiserror::Error;

/// Errors surfaced by the engine. Every variant carries a stable machine
/// readable code (see [`Error::code`]) so CLI consumers can dispatch on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),

    #[error("size guard exceeded: {what} = {actual} > {limit}")]
    SizeGuard {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown or invalid property request: {0}")]
    InvalidProperty(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "malformed-input",
            Error::AmbientMismatch(_) => "ambient-mismatch",
            Error::ContextMismatch(_) => "context-mismatch",
            Error::SizeGuard { .. } => "size-guard",
            Error::Precondition(_) => "precondition",
            Error::InvalidProperty(_) => "invalid-property",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
