use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid multislice spec: {0}")]
    InvalidSpec(String),

    #[error("enumeration too large: {size} states exceeds cap {cap}")]
    EnumerationTooLarge { size: String, cap: u128 },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("malformed config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn too_large(size: impl ToString, cap: u128) -> Self {
        Error::EnumerationTooLarge {
            size: size.to_string(),
            cap,
        }
    }
}
