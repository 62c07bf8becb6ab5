//! Explicit verification: random projections to `P³`, ramification ideals and
//! their lengths, and local jets along the exceptional curve of a blow-up.

mod jets;
mod ram;

use thiserror::Error;

use crate::catalog::CatalogError;
use crate::exactalg::AlgError;

pub use jets::{exceptional_rank, jet_normalize, random_chart_point, ExceptionalRank, JetChart};
pub use ram::{
    attempt_seed, image_degree, project, ram_ideal, ram_length, ram_length_with_retries, AttemptOutcome,
    ProjectionExperiment, RamAttempt, RamReport, RamStatus,
};

#[derive(Debug, Error)]
pub enum ProjectorError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no usable projection after {0} draws")]
    NoProjection(usize),
    #[error("chart is not immersive at the chosen point: {0}")]
    NotImmersive(String),
    #[error("normalization contract violated: {0}")]
    NormalizationContract(String),
    #[error("quotient is positive dimensional (dimension {0})")]
    PositiveDimensional(usize),
}
