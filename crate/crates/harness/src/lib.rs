//! Verification and convergence experiments over chainlet: integral theorems at increasing
//! refinement, randomized identity suites, norm oracles, dual-mesh sequences and refinement
//! Cauchy brackets. Every experiment returns a [`Report`] with a per-row table and named checks.

pub mod cauchy;
pub mod config;
pub mod gen;
pub mod hodge;
pub mod identities;
pub mod norm_oracle;
pub mod quadrature;
pub mod report;
pub mod suite;
pub mod theorems;

pub use config::HarnessConfig;
pub use report::{Check, Report, Table};
pub use suite::{run_suite, Suite};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Chain(#[from] chainlet::chains::ChainError),
    #[error(transparent)]
    Form(#[from] chainlet::forms::FormError),
    #[error(transparent)]
    Norm(#[from] chainlet::norms::NormError),
    #[error(transparent)]
    Geometry(#[from] chainlet::geometry::GeometryError),
    #[error(transparent)]
    Algebra(#[from] chainlet::algebra::AlgebraError),
    #[error("output: {0}")]
    Output(String),
    #[error("config: {0}")]
    Config(String),
}
