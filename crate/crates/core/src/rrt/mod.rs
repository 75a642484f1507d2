//! Rapidly-exploring random trees driven by a sample sequence, and the
//! planar kinematic chain in a semi-circular tunnel.

mod chain;
mod planner;
mod sweep;

pub use chain::{chain_forward_kinematics, ChainEnv, ChainGeometry};
pub use planner::{rrt_plan, Environment, PlanResult, RrtConfig, SampleSource, Tree};
pub use sweep::{
    plan_rep, precompute_sources, rep_rotation, success_rate, RrtSource, SuccessCell, SuccessTable, DEFAULT_WIDTHS,
};

use thiserror::Error;

use crate::seq::SeqError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RrtError {
    #[error("start configuration is in collision")]
    StartInCollision,
    #[error("sample source exhausted after {available} samples")]
    SourceExhausted { available: usize },
    #[error("sample has dimension {found}, environment has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid planner configuration: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Sequence(#[from] SeqError),
}
