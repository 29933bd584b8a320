use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus error: {0}")]
    Modulus(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("invalid curve: {0}")]
    Curve(String),
    #[error("origami is not connected")]
    Connectivity,
    #[error("orientation propagation failed along cycle {0:?}")]
    Orientability(Vec<String>),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("obstruction: {0}")]
    Obstruction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("template error: {0}")]
    Template(String),
}

pub type Result<T> = std::result::Result<T, Error>;
