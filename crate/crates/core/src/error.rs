use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("wrong field: {0}")]
    WrongField(String),

    #[error("coefficient not representable: {0}")]
    NotRepresentable(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("invalid variable index {0}")]
    InvalidVariable(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation hit its resource budget. Never a mathematical verdict.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("critical locus is positive-dimensional in chart {0}")]
    PositiveDimensionalCriticalLocus(usize),

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("dg vanishes at the point")]
    DgVanishes,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
