use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A string failed to parse under one of the small grammars (rho,
    /// model, composition, partition). `position` is a byte offset into
    /// the original input.
    #[error("parse error in {what} at byte {position}: {message}")]
    Parse {
        what: &'static str,
        position: usize,
        message: String,
    },

    /// A composition violates the block-size constraints for the given
    /// constraint sequence.
    #[error("composition {composition} is not constrained for rho = {rho}")]
    NotConstrained { composition: String, rho: String },

    /// A size guard was exceeded (enumeration, matrix construction, ...).
    #[error("size guard `{guard}` exceeded: limit {limit}, requested {requested}")]
    SizeGuard {
        guard: &'static str,
        limit: u64,
        requested: u64,
    },

    /// A fixed frequency model with a hard stop was asked for more values
    /// than it holds.
    #[error("frequency model exhausted: H_{index} requested but the model stops after {len} values")]
    ModelExhausted { index: usize, len: usize },

    /// Lazy extension of a frequency path exceeded the block guard.
    #[error("max-blocks guard exceeded: more than {limit} blocks requested; the model's tail masses decay too slowly")]
    MaxBlocks { limit: usize },

    /// The model kind does not support the requested operation.
    #[error("invalid model for this operation: {0}")]
    InvalidModel(String),

    /// A numeric argument is outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Exact integer counting overflowed the 128-bit accumulator.
    #[error("integer overflow while counting: {0}")]
    Overflow(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: usage errors are 2,
    /// guard violations are 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::NotConstrained { .. }
            | Error::InvalidModel(_)
            | Error::InvalidParameter(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::SizeGuard { .. }
            | Error::ModelExhausted { .. }
            | Error::MaxBlocks { .. }
            | Error::Overflow(_) => 3,
        }
    }
}
