//! Single-set and all-prefix discrepancy evaluation.
//!
//! The all-prefix evaluator keeps running sums `S1 = Σ_{i≤P} b_i` and
//! `S2 = Σ_{i,j≤P} k_ij`; adding point `P` costs `2 r_P + k_PP` where
//! `r_P = Σ_{i<P} k(x_P, x_i)`, giving O(dN²) for the whole curve.
//! Row sums are independent, so callers may compute them in parallel and
//! hand them to [`prefix_curve_from_row_sums`]; the result is identical.

use alloc::vec::Vec;

use super::{finish_radicand, Compensated, DiscError, KernelSpec};
use crate::points::PointBuffer;

/// `Σ_{i<j} k(x_j, x_i)`, summed in increasing `i`.
#[inline]
pub fn pair_row_sum(spec: &KernelSpec, points: &PointBuffer, j: usize) -> f64 {
    let xj = points.row(j);
    let mut acc = 0.0;
    for i in 0..j {
        acc += spec.pair(xj, points.row(i));
    }
    acc
}

fn check(spec: &KernelSpec, points: &PointBuffer, needed: usize) -> Result<(), DiscError> {
    spec.check_dim(points.dim())?;
    if points.n_points() < needed {
        return Err(DiscError::TooFewPoints {
            needed,
            found: points.n_points(),
        });
    }
    Ok(())
}

/// Discrepancy of every prefix `P = 1..N` given precomputed row sums.
pub fn prefix_curve_from_row_sums(
    spec: &KernelSpec,
    points: &PointBuffer,
    row_sums: &[f64],
) -> Result<Vec<f64>, DiscError> {
    check(spec, points, 1)?;
    assert_eq!(row_sums.len(), points.n_points(), "one row sum per point");
    let c0 = spec.constant(points.dim());
    let mut s1 = Compensated::default();
    let mut s2 = Compensated::default();
    let mut out = Vec::with_capacity(points.n_points());
    for (p, (x, &row)) in points.rows().zip(row_sums).enumerate() {
        s1.add(spec.mean_embedding(x));
        s2.add(2.0 * row + spec.diag(x));
        let n = (p + 1) as f64;
        let radicand = c0 - 2.0 * s1.value() / n + s2.value() / (n * n);
        out.push(finish_radicand(radicand, p + 1)?);
    }
    Ok(out)
}

/// Discrepancy of every prefix `P = 1..N`; entry `P − 1` is the
/// discrepancy of the first `P` points.
pub fn discrepancy_all_prefixes(spec: &KernelSpec, points: &PointBuffer) -> Result<Vec<f64>, DiscError> {
    check(spec, points, 1)?;
    let rows: Vec<f64> = (0..points.n_points()).map(|j| pair_row_sum(spec, points, j)).collect();
    prefix_curve_from_row_sums(spec, points, &rows)
}

/// Discrepancy of the whole point set.
pub fn discrepancy_single(spec: &KernelSpec, points: &PointBuffer) -> Result<f64, DiscError> {
    let curve = discrepancy_all_prefixes(spec, points)?;
    Ok(curve[curve.len() - 1])
}
