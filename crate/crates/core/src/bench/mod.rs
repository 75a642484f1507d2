//! Integration benchmarks: the Borehole function, QMC error studies,
//! Saltelli sensitivity analysis and a closed-form basket-option price.

mod basket;
mod borehole;
mod integrate;
mod sensitivity;

pub use basket::{basket_price, normal_cdf, BasketOptionSpec};
pub use borehole::{borehole, borehole_physical, BoreholeSpec, BOREHOLE_PARAMS};
pub use integrate::{
    integrate, mc_estimate, Checkpoint, IntegrationResult, REFERENCE_SAMPLES, REFERENCE_SEED, TABLE_GRID,
};
pub use sensitivity::{sensitivity, weights_from_sensitivity, SensitivityResult};

use thiserror::Error;

use crate::seq::SeqError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("expected a point of dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("checkpoint {checkpoint} exceeds the sample count {n}")]
    Checkpoint { checkpoint: usize, n: usize },
    #[error("need at least one sample")]
    NoSamples,
    #[error("integrand output has zero variance")]
    ZeroVariance,
    #[error("weight floor must be positive and finite")]
    InvalidFloor,
    #[error("all sensitivity indices are zero")]
    AllZeroIndices,
    #[error("asset prices must be positive")]
    NonPositivePrice,
    #[error("invalid basket specification: {0}")]
    BasketSpec(&'static str),
    #[error(transparent)]
    Sequence(#[from] SeqError),
}
