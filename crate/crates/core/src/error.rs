use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),

    #[error("coincident points")]
    CoincidentPoints,

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("invalid polygon: {0}")]
    InvalidPolygon(&'static str),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(&'static str),

    #[error("insufficient samples: {got} < {min}")]
    InsufficientSamples { got: u64, min: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
