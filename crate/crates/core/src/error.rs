use thiserror::Error;

/// Errors surfaced by the library.
///
/// The split mirrors how callers react: `Invalid*` are caller mistakes,
/// `CapabilityExceeded` means a documented size precondition was violated,
/// and `BadInput` is a malformed external file (forest JSON etc.).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size limit exceeded: {0}")]
    CapabilityExceeded(String),

    #[error("mismatched sizes: {0}")]
    Mismatch(String),

    #[error("element is not an involution")]
    NotAnInvolution,

    #[error("bad input at node {node}: {msg}")]
    BadInput { node: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::CapabilityExceeded(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }
}
