use alloc::vec;
use alloc::vec::Vec;

use super::BenchError;
use crate::seq::{Sequence, SequenceKind, SequenceSpec};

/// First-order and total Sobol' indices with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityResult {
    pub first_order: Vec<f64>,
    pub total: Vec<f64>,
    pub first_order_se: Vec<f64>,
    pub total_se: Vec<f64>,
    pub base_n: usize,
    /// Integrand evaluations used: `base_n · (2d + 2)`.
    pub evaluations: usize,
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, libm::sqrt(var / n))
}

/// Saltelli design with Jansen estimators.
///
/// `A` and `B` are the two halves of an Owen-scrambled Sobol' sequence of
/// dimension `2d` keyed by `seed`. For each input `i`, `AB_i` is `A` with
/// column `i` from `B` and `BA_i` is `B` with column `i` from `A`, giving
/// `N(2d + 2)` evaluations. With `V` the variance of `f(A) ∪ f(B)`:
///
/// ```text
/// S_i  = 1 − ( E[(f(B) − f(AB_i))²] + E[(f(A) − f(BA_i))²] ) / 4V
/// ST_i =     ( E[(f(A) − f(AB_i))²] + E[(f(B) − f(BA_i))²] ) / 4V
/// ```
pub fn sensitivity<F: Fn(&[f64]) -> f64>(
    f: F,
    d: usize,
    base_n: usize,
    seed: u64,
) -> Result<SensitivityResult, BenchError> {
    if base_n < 2 {
        return Err(BenchError::NoSamples);
    }
    let spec = SequenceSpec::new(SequenceKind::ScrambledSobol, 2 * d).with_seed(seed);
    let base = Sequence::new(&spec)?.generate(base_n)?;
    let split = |row: &[f64]| -> (Vec<f64>, Vec<f64>) { (row[..d].to_vec(), row[d..].to_vec()) };

    let mut fa = Vec::with_capacity(base_n);
    let mut fb = Vec::with_capacity(base_n);
    for row in base.rows() {
        let (a, b) = split(row);
        fa.push(f(&a));
        fb.push(f(&b));
    }
    let all: Vec<f64> = fa.iter().chain(&fb).copied().collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let var = all.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / all.len() as f64;
    if !(var > 0.0) {
        return Err(BenchError::ZeroVariance);
    }

    let mut first_order = vec![0.0; d];
    let mut total = vec![0.0; d];
    let mut first_order_se = vec![0.0; d];
    let mut total_se = vec![0.0; d];
    let mut u = vec![0.0; base_n];
    let mut w = vec![0.0; base_n];
    for i in 0..d {
        for (k, row) in base.rows().enumerate() {
            let (mut ab, mut ba) = split(row);
            core::mem::swap(&mut ab[i], &mut ba[i]);
            let fab = f(&ab);
            let fba = f(&ba);
            let sq = |x: f64| x * x;
            u[k] = 0.25 * (sq(fb[k] - fab) + sq(fa[k] - fba));
            w[k] = 0.25 * (sq(fa[k] - fab) + sq(fb[k] - fba));
        }
        let (mu, su) = mean_and_se(&u);
        let (mw, sw) = mean_and_se(&w);
        first_order[i] = 1.0 - mu / var;
        first_order_se[i] = su / var;
        total[i] = mw / var;
        total_se[i] = sw / var;
    }
    Ok(SensitivityResult {
        first_order,
        total,
        first_order_se,
        total_se,
        base_n,
        evaluations: base_n * (2 * d + 2),
    })
}

/// Product weights from total indices: `γ_i = clamp(ST_i / max ST + floor,
/// floor, 1)`.
pub fn weights_from_sensitivity(result: &SensitivityResult, floor: f64) -> Result<Vec<f64>, BenchError> {
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(BenchError::InvalidFloor);
    }
    let max = result.total.iter().cloned().fold(0.0f64, f64::max);
    if !(max > 0.0) {
        return Err(BenchError::AllZeroIndices);
    }
    Ok(result
        .total
        .iter()
        .map(|&s| (s.max(0.0) / max + floor).clamp(floor, 1.0))
        .collect())
}
