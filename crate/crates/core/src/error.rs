use num_complex::Complex64;

use crate::expr::{DiffError, EvalError, IllegalVariable, ParseError};

/// Errors raised by the integration and verification engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Mode(#[from] IllegalVariable),
    #[error("evaluation failed at {at}: {source}")]
    Eval { at: Complex64, source: EvalError },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("parameter {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{0}")]
    Singular(String),
}

impl Error {
    pub(crate) fn eval(at: Complex64) -> impl FnOnce(EvalError) -> Error {
        move |source| Error::Eval { at, source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
