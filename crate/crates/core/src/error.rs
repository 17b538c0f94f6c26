use thiserror::Error;

use crate::ring::LaurentPoly;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("ring signature mismatch: {0}")]
    Signature(String),

    #[error("image of the base variable must be a unit monomial, got {0}")]
    NonUnitSubstitution(String),

    #[error("series argument outside the truncation domain: {0}")]
    SeriesDomain(String),

    #[error("transition composite is not the identity; residual {residual}")]
    Composition { coordinate: String, residual: Box<LaurentPoly> },

    #[error("incompatible transition: {0}")]
    IncompatibleTransition(String),

    #[error("matrix is not invertible over the overlap: {0}")]
    NonInvertibleMatrix(String),

    #[error("determinant is not a unit monomial: {0}")]
    NonUnitDeterminant(String),

    #[error("grading does not slice the cochain space finitely and box escalation gave up: {0}")]
    NonFiniteSlice(String),

    #[error("elimination would exceed the cell limit: {0}")]
    CellLimit(String),

    #[error("perturbed transition cannot be inverted by back-substitution: {0}")]
    NonInvertiblePerturbation(String),

    #[error("operation needs numeric parameters but the space carries symbolic ones: {0}")]
    SymbolicParameters(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid input: {0}")]
    Input(String),
}
