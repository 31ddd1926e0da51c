//! Classical objects as monopolar chains: cubes and simplices refined into poles, fields and
//! forms sampled on grids, binning, and the dual-mesh Hodge report.

mod cells;
mod complex;
mod fields;
mod hodge;
#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::chains::ChainError;
use crate::forms::FormError;
use crate::norms::NormError;

pub use cells::{CubeCell, SimplexCell};
pub use complex::SimplicialComplex;
pub use fields::{bin_chain, form_chain, vector_field_chain, Grid};
pub use hodge::{
    hodge_sequence_report, square_grid_family, square_grid_pair, CellPair, DualKind, HodgeConfig,
    HodgeLevel, HodgeReport, HodgeVerdict, MeshPair,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate cell: {0}")]
    Degenerate(String),
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("bijection incomplete: {0}")]
    Bijection(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Norm(#[from] NormError),
}
