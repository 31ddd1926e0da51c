//! Multilinear algebra: `Lambda_k(V)`, `S^j(V)` and the bigraded algebra `X(V)`.

mod index;
mod kvector;
mod xelement;

use thiserror::Error;

pub use index::{MultiIndex, SymMonomial, MAX_DIM};
pub use kvector::{gram_mass, perp_basis, KVector};
pub use xelement::{XElement, XTerm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("basis index {index} exceeds dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("slant product by the zero k-vector")]
    SlantByZero,
    #[error("grade violation: {0}")]
    GradeViolation(String),
}
