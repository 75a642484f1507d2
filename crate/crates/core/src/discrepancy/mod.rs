//! Closed-form L2 kernel discrepancies.
//!
//! For a product kernel `k` on `[0,1]^d` the squared discrepancy of
//! `x_1 .. x_N` is
//!
//! ```text
//! D² = c0 − (2/N) Σ_i b(x_i) + (1/N²) Σ_{i,j} k(x_i, x_j)
//! ```
//!
//! with `b(x) = ∫ k(x, y) dy` and `c0 = ∬ k`. [`KernelSpec`] owns the
//! per-family one-dimensional pieces; [`eval`] computes single and
//! all-prefix discrepancies; [`loss`] computes the prefix-weighted loss
//! `Σ_P w_P D²(P)` and its gradient with respect to the points.

pub mod eval;
mod kernel;
pub mod loss;

pub use eval::{discrepancy_all_prefixes, discrepancy_single, pair_row_sum, prefix_curve_from_row_sums};
pub use kernel::{KernelFamily, KernelSpec};
pub use loss::{
    grad_row, prefix_loss, prefix_loss_and_grad, prefix_loss_from_row_sums, prefix_loss_grad, LossCoefficients,
    PrefixScheme, PrefixWeights,
};

/// Radicands down to this value are treated as rounding noise and clamped
/// to zero before the square root.
pub const RADICAND_TOLERANCE: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscError {
    #[error("point dimension {found} does not match kernel dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("negative radicand {value:e} at prefix {prefix}: numerical failure")]
    NegativeRadicand { prefix: usize, value: f64 },
    #[error("prefix weight vector has {found} entries, expected {expected} (P = 2..N)")]
    WeightLength { expected: usize, found: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(&'static str),
}

/// Compensated (Kahan–Babuška/Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn finish_radicand(radicand: f64, prefix: usize) -> Result<f64, DiscError> {
    if radicand < RADICAND_TOLERANCE || radicand.is_nan() {
        return Err(DiscError::NegativeRadicand {
            prefix,
            value: radicand,
        });
    }
    Ok(libm::sqrt(radicand.max(0.0)))
}
