use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("scalar mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("inner map has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("linear part is singular")]
    SingularLinearPart,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("the family does not commute modulo degree {degree}")]
    NotCommuting { degree: usize },

    #[error("map {index} has a non-diagonal linear part")]
    NonDiagonalLinearPart { index: usize },

    #[error("zero eigenvalue in map {index}")]
    ZeroEigenvalue { index: usize },

    #[error("obstruction at Q={multiindex:?}, component {component}: coefficient {coefficient}")]
    Obstruction {
        multiindex: Vec<u32>,
        /// 1-based component index.
        component: usize,
        coefficient: String,
    },

    #[error("members {first} and {second} give different values at Q={multiindex:?}, component {component}")]
    Incompatible {
        multiindex: Vec<u32>,
        component: usize,
        first: usize,
        second: usize,
    },

    #[error("all small divisors vanish for |Q| <= {max_degree}")]
    AllDivisorsVanish { max_degree: usize },

    #[error("majorant decomposition budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("the family of involutions is not commutative modulo degree {degree}")]
    NotCommutative { degree: usize },

    #[error("hypothesis failed ({check}): {witness}")]
    HypothesisFailed { check: String, witness: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
