use thiserror::Error;

use crate::speclang::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("position {position} out of range for a word of degree {degree}")]
    PositionOutOfRange { position: usize, degree: usize },
    #[error("generator `{0}` is not invertible in this algebra")]
    NotInvertible(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid bracket table: {0}")]
    InvalidTable(String),
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("parameters out of domain: {0}")]
    Domain(String),
    #[error("inference failed: {0}")]
    Inference(String),
    #[error("localisation requires a mixed double algebra of the given weight: {0}")]
    WeightHypothesis(String),
    #[error("matrix error: {0}")]
    Matrix(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
