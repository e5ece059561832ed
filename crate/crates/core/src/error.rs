use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("rotation is not a unit: c^2 + s^2 != 1")]
    InvalidRotation,
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid tiling system: {0}")]
    InvalidSystem(String),
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty set after clipping to radius {radius}")]
    EmptyAfterClipping { radius: f64 },
    #[error("unsupported arithmetic class: {0}")]
    UnsupportedClass(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
