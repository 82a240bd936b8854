use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("dataset has no samples")]
    Empty,
    #[error("dimension mismatch in sample {row}, field `{field}`: expected {expected}, found {found}")]
    DimensionMismatch {
        row: usize,
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry in sample {row}, field `{field}`")]
    NonFinite { row: usize, field: String },
    #[error("dataset kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("invalid block partition: {0}")]
    Partition(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("sample {0} lies outside the domain")]
    OutsideDomain(usize),
    #[error("inconsistent certificate template: {0}")]
    InconsistentTemplate(String),
    #[error("numeric divergence: {0}")]
    Divergence(String),
    #[error("extension construction failed: {0}")]
    Extension(String),
    #[error("unsupported request: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
