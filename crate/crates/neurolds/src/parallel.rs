//! Thread-pool versions of the O(N²) evaluators and the RRT sweep.
//!
//! Work is split by point: each row sum and each gradient row is computed
//! by exactly the same sequential code as in the core crate, and the final
//! reductions run in index order on one thread. Results are therefore
//! bit-identical to the single-threaded functions for any thread count.

use std::time::Instant;

use neurolds_core::discrepancy::{
    grad_row, pair_row_sum, prefix_curve_from_row_sums, prefix_loss_from_row_sums, DiscError, LossCoefficients,
};
use neurolds_core::rrt::{plan_rep, ChainGeometry, RrtConfig, RrtError, RrtSource, SuccessCell, SuccessTable};
use neurolds_core::trainer::{Clock, LossEvaluator};
use neurolds_core::{KernelSpec, PointBuffer, PrefixWeights};
use rayon::prelude::*;
use rayon::ThreadPool;

/// Builds a pool with `threads` workers (at least one).
pub fn thread_pool(threads: usize) -> anyhow::Result<ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?)
}

fn row_sums(pool: &ThreadPool, spec: &KernelSpec, points: &PointBuffer) -> Vec<f64> {
    pool.install(|| {
        (0..points.n_points())
            .into_par_iter()
            .map(|j| pair_row_sum(spec, points, j))
            .collect()
    })
}

/// All-prefix discrepancies with the pair loop spread over `pool`.
pub fn discrepancy_all_prefixes_par(
    pool: &ThreadPool,
    spec: &KernelSpec,
    points: &PointBuffer,
) -> Result<Vec<f64>, DiscError> {
    spec.check_dim(points.dim())?;
    let rows = row_sums(pool, spec, points);
    prefix_curve_from_row_sums(spec, points, &rows)
}

/// Prefix loss and gradient on a thread pool.
#[derive(Debug)]
pub struct ParallelEvaluator<'p> {
    pub pool: &'p ThreadPool,
}

impl LossEvaluator for ParallelEvaluator<'_> {
    fn loss_and_grad(
        &self,
        spec: &KernelSpec,
        weights: &PrefixWeights,
        points: &PointBuffer,
    ) -> Result<(f64, Vec<f64>), DiscError> {
        spec.check_dim(points.dim())?;
        let rows = row_sums(self.pool, spec, points);
        let loss = prefix_loss_from_row_sums(spec, weights, points, &rows)?;
        let coeffs = LossCoefficients::new(weights);
        let d = points.dim();
        let mut grad = vec![0.0; points.n_points() * d];
        self.pool.install(|| {
            grad.par_chunks_exact_mut(d)
                .enumerate()
                .for_each(|(m, g)| grad_row(spec, &coeffs, points, m, g));
        });
        Ok((loss, grad))
    }
}

/// Seconds since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(Instant::now())
    }
}

impl Clock for WallClock {
    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// [`neurolds_core::rrt::success_rate`] with repetitions run in parallel.
pub fn success_rate_par(
    pool: &ThreadPool,
    geometry: &ChainGeometry,
    widths: &[f64],
    reps: usize,
    sources: &[RrtSource],
    cfg: &RrtConfig,
    env_seed: u64,
) -> Result<SuccessTable, RrtError> {
    if reps == 0 {
        return Err(RrtError::Config("reps must be at least 1"));
    }
    if sources.iter().any(|s| s.sequences.is_empty()) {
        return Err(RrtError::Config("every source needs at least one sequence"));
    }
    let mut table = SuccessTable::default();
    for src in sources {
        for &width in widths {
            let outcomes: Vec<Result<bool, RrtError>> = pool.install(|| {
                (0..reps)
                    .into_par_iter()
                    .map(|rep| {
                        let seq = &src.sequences[rep % src.sequences.len()];
                        plan_rep(geometry, width, rep, env_seed, cfg, seq)
                    })
                    .collect()
            });
            let mut successes = 0;
            for o in outcomes {
                successes += o? as usize;
            }
            table.cells.push(SuccessCell {
                source: src.label.clone(),
                width,
                successes,
                reps,
            });
        }
    }
    Ok(table)
}
