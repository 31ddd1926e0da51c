//! Differential forms with symbolic coefficients, smooth maps, and their action on chains.

mod expr;
mod form;
mod map;
mod parse;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use expr::{CoeffFn, Const};
pub use form::{Form, FormEvaluator, FormNormEstimate, NormMethod, SampleSpec};
pub use map::SmoothMap;
pub use parse::{parse_coeff, parse_form};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not representable in this arithmetic mode: {0}")]
    NotRepresentable(&'static str),
    #[error("grade violation: {0}")]
    GradeViolation(String),
    #[error("extrusion by the zero k-vector")]
    ExtrusionByZero,
    #[error("empty sample set")]
    EmptySample,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
