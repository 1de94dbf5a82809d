use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: {0}")]
    NotAUnit(u32),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ring mismatch")]
    RingMismatch,

    #[error("signature mismatch")]
    SignatureMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("not an ideal")]
    NotAnIdeal,

    #[error("the zero algebra has no monolith")]
    ZeroAlgebra,

    #[error("{what} cap exceeded (cap {cap})")]
    CapExceeded { what: &'static str, cap: u64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn cap(what: &'static str, cap: impl Into<u64>) -> Self {
        Error::CapExceeded { what, cap: cap.into() }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
