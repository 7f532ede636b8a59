use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0:?} vs {1:?}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("locality certificate required")]
    MissingCertificate,
    #[error("homology is not bounded below: {0}")]
    Unbounded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
