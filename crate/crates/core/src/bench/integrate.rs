use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BenchError;
use crate::discrepancy::Compensated;
use crate::seq::Sequence;

/// Default error checkpoints `N = 20, 60, …, 500`.
pub const TABLE_GRID: [usize; 13] = [20, 60, 100, 140, 180, 220, 260, 300, 340, 380, 420, 460, 500];

/// Seed of the plain Monte Carlo reference run for the Borehole integral.
pub const REFERENCE_SEED: u64 = 2021;

/// Sample count of the Monte Carlo reference run (2²¹).
pub const REFERENCE_SAMPLES: usize = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub n: usize,
    pub estimate: f64,
    /// `|estimate − reference|`, if a reference was supplied.
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult {
    /// Sample mean over all `n` points.
    pub estimate: f64,
    pub checkpoints: Vec<Checkpoint>,
}

/// Sample mean of `f` over the first `n` points of `seq`, recording the
/// running estimate at each checkpoint.
pub fn integrate<F: Fn(&[f64]) -> f64>(
    seq: &Sequence,
    f: F,
    n: usize,
    checkpoints: &[usize],
    reference: Option<f64>,
) -> Result<IntegrationResult, BenchError> {
    if n == 0 {
        return Err(BenchError::NoSamples);
    }
    if let Some(&c) = checkpoints.iter().find(|&&c| c == 0 || c > n) {
        return Err(BenchError::Checkpoint { checkpoint: c, n });
    }
    let mut x = vec![0.0; seq.dim()];
    let mut sum = Compensated::default();
    let mut running = Vec::with_capacity(n);
    for k in 0..n {
        seq.point_into(k as u64, &mut x)?;
        sum.add(f(&x));
        running.push(sum.value() / (k + 1) as f64);
    }
    let checkpoints = checkpoints
        .iter()
        .map(|&c| {
            let estimate = running[c - 1];
            Checkpoint {
                n: c,
                estimate,
                abs_error: reference.map(|r| (estimate - r).abs()),
            }
        })
        .collect();
    Ok(IntegrationResult {
        estimate: running[n - 1],
        checkpoints,
    })
}

/// Plain Monte Carlo mean of `f` over `n` IID uniform points in
/// `[0,1]^dim`, drawn from ChaCha8 seeded with `seed`.
pub fn mc_estimate<F: Fn(&[f64]) -> f64>(f: F, dim: usize, n: usize, seed: u64) -> Result<f64, BenchError> {
    if n == 0 {
        return Err(BenchError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; dim];
    let mut sum = Compensated::default();
    for _ in 0..n {
        x.iter_mut().for_each(|v| *v = rng.random::<f64>());
        sum.add(f(&x));
    }
    Ok(sum.value() / n as f64)
}
