//! Prefix-weighted discrepancy loss `L = Σ_{P=2}^N w_P D²(P)` and its
//! gradient.
//!
//! Expanding every `D²(P)` and collecting terms gives one linear form:
//!
//! ```text
//! L = W c0 + Σ_i α_i b_i + Σ_i β_i k_ii + 2 Σ_{i<j} β_j k_ij
//! α_i = Σ_{P ≥ max(i,2)} −2 w_P / P      β_i = Σ_{P ≥ max(i,2)} w_P / P²
//! ```
//!
//! so the loss and its gradient cost one O(dN²) pass.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::eval::pair_row_sum;
use super::{Compensated, DiscError, KernelSpec};
use crate::points::PointBuffer;

/// Named prefix-weight schemes.
#[derive(Debug, Clone, PartialEq)]
pub enum PrefixScheme {
    /// `w_P = 1/(N − 1)`: every prefix `P = 2..N` counts equally.
    Uniform,
    /// `w_P = 2P / (N² + N − 2)`.
    LengthProportional,
    /// Explicit `w_2 .. w_N`, used as given.
    Custom(Vec<f64>),
}

impl PrefixScheme {
    pub fn name(&self) -> &'static str {
        match self {
            PrefixScheme::Uniform => "uniform",
            PrefixScheme::LengthProportional => "length-proportional",
            PrefixScheme::Custom(_) => "custom",
        }
    }
}

impl fmt::Display for PrefixScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PrefixScheme {
    type Err = String;

    /// Accepts `uniform`, `length-proportional` or a comma-separated list
    /// of custom weights.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(PrefixScheme::Uniform),
            "length-proportional" | "length" => Ok(PrefixScheme::LengthProportional),
            other => other
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(PrefixScheme::Custom)
                .map_err(|_| alloc::format!("unknown prefix-weight scheme `{s}`")),
        }
    }
}

/// Weights `w_2 .. w_N` of the prefix loss.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixWeights {
    values: Vec<f64>,
}

impl PrefixWeights {
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 2, "prefix loss needs N >= 2");
        let w = 1.0 / (n - 1) as f64;
        PrefixWeights { values: vec![w; n - 1] }
    }

    pub fn length_proportional(n: usize) -> Self {
        assert!(n >= 2, "prefix loss needs N >= 2");
        let nf = n as f64;
        let denom = nf * nf + nf - 2.0;
        PrefixWeights {
            values: (2..=n).map(|p| 2.0 * p as f64 / denom).collect(),
        }
    }

    /// Custom weights `w_2 .. w_N`; must be nonnegative and finite.
    pub fn custom(values: Vec<f64>) -> Result<Self, DiscError> {
        if values.is_empty() {
            return Err(DiscError::InvalidWeights("custom prefix weights are empty"));
        }
        if values.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(DiscError::InvalidWeights(
                "prefix weights must be nonnegative and finite",
            ));
        }
        Ok(PrefixWeights { values })
    }

    pub fn from_scheme(scheme: &PrefixScheme, n: usize) -> Result<Self, DiscError> {
        if n < 2 {
            return Err(DiscError::TooFewPoints { needed: 2, found: n });
        }
        match scheme {
            PrefixScheme::Uniform => Ok(Self::uniform(n)),
            PrefixScheme::LengthProportional => Ok(Self::length_proportional(n)),
            PrefixScheme::Custom(v) => {
                if v.len() != n - 1 {
                    return Err(DiscError::WeightLength {
                        expected: n - 1,
                        found: v.len(),
                    });
                }
                Self::custom(v.clone())
            }
        }
    }

    /// Largest `N` the weights cover.
    pub fn n_points(&self) -> usize {
        self.values.len() + 1
    }

    /// `w_P` for `P` in `2..=N`.
    pub fn weight(&self, p: usize) -> f64 {
        self.values[p - 2]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// The `α_i`, `β_i` coefficients of the linear loss form (0-based `i`).
#[derive(Debug, Clone)]
pub struct LossCoefficients {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub total_weight: f64,
}

impl LossCoefficients {
    pub fn new(weights: &PrefixWeights) -> Self {
        let n = weights.n_points();
        let mut alpha = vec![0.0; n];
        let mut beta = vec![0.0; n];
        let (mut a, mut b) = (0.0, 0.0);
        for p in (2..=n).rev() {
            let w = weights.weight(p);
            let pf = p as f64;
            a += -2.0 * w / pf;
            b += w / (pf * pf);
            alpha[p - 1] = a;
            beta[p - 1] = b;
        }
        alpha[0] = alpha[1];
        beta[0] = beta[1];
        LossCoefficients {
            alpha,
            beta,
            total_weight: weights.total(),
        }
    }
}

fn check(spec: &KernelSpec, weights: &PrefixWeights, points: &PointBuffer) -> Result<(), DiscError> {
    spec.check_dim(points.dim())?;
    if points.n_points() < 2 {
        return Err(DiscError::TooFewPoints {
            needed: 2,
            found: points.n_points(),
        });
    }
    if weights.n_points() != points.n_points() {
        return Err(DiscError::WeightLength {
            expected: points.n_points() - 1,
            found: weights.values().len(),
        });
    }
    Ok(())
}

/// Loss from precomputed row sums `r_j = Σ_{i<j} k_ij`.
pub fn prefix_loss_from_row_sums(
    spec: &KernelSpec,
    weights: &PrefixWeights,
    points: &PointBuffer,
    row_sums: &[f64],
) -> Result<f64, DiscError> {
    check(spec, weights, points)?;
    assert_eq!(row_sums.len(), points.n_points(), "one row sum per point");
    let coeffs = LossCoefficients::new(weights);
    let mut acc = Compensated::default();
    acc.add(coeffs.total_weight * spec.constant(points.dim()));
    for (i, x) in points.rows().enumerate() {
        acc.add(coeffs.alpha[i] * spec.mean_embedding(x));
        acc.add(coeffs.beta[i] * (spec.diag(x) + 2.0 * row_sums[i]));
    }
    Ok(acc.value())
}

/// `Σ_{P=2}^N w_P D²(P)` over the prefixes of `points`.
pub fn prefix_loss(spec: &KernelSpec, weights: &PrefixWeights, points: &PointBuffer) -> Result<f64, DiscError> {
    check(spec, weights, points)?;
    let rows: Vec<f64> = (0..points.n_points()).map(|j| pair_row_sum(spec, points, j)).collect();
    prefix_loss_from_row_sums(spec, weights, points, &rows)
}

/// Adds `scale · deriv_l · Π_{t≠l} factor_t` to `out[l]` for every `l`,
/// without dividing by factors (which may vanish).
#[inline]
fn add_leave_one_out(factors: &[f64], derivs: &[f64], scale: f64, suffix: &mut [f64], out: &mut [f64]) {
    let d = factors.len();
    let mut s = 1.0;
    for t in (0..d).rev() {
        suffix[t] = s;
        s *= factors[t];
    }
    let mut prefix = 1.0;
    for l in 0..d {
        out[l] += scale * derivs[l] * prefix * suffix[l];
        prefix *= factors[l];
    }
}

/// Gradient of the loss with respect to point `m`, written to `out`
/// (length `d`). Pair terms are summed in increasing partner index.
pub fn grad_row(spec: &KernelSpec, coeffs: &LossCoefficients, points: &PointBuffer, m: usize, out: &mut [f64]) {
    let d = points.dim();
    let f = spec.family();
    let x = points.row(m);
    let mut factors = vec![0.0; d];
    let mut derivs = vec![0.0; d];
    let mut suffix = vec![0.0; d];
    out.fill(0.0);

    for l in 0..d {
        let (o, g) = spec.affine(l);
        factors[l] = o + g * f.b(x[l]);
        derivs[l] = g * f.db(x[l]);
    }
    add_leave_one_out(&factors, &derivs, coeffs.alpha[m], &mut suffix, out);

    for l in 0..d {
        let (o, g) = spec.affine(l);
        factors[l] = o + g * f.k_diag(x[l]);
        derivs[l] = g * f.dk_diag(x[l]);
    }
    add_leave_one_out(&factors, &derivs, coeffs.beta[m], &mut suffix, out);

    for (j, y) in points.rows().enumerate() {
        if j == m {
            continue;
        }
        for l in 0..d {
            let (o, g) = spec.affine(l);
            factors[l] = o + g * f.k(x[l], y[l]);
            derivs[l] = g * f.dk_dx(x[l], y[l]);
        }
        add_leave_one_out(&factors, &derivs, 2.0 * coeffs.beta[m.max(j)], &mut suffix, out);
    }
}

/// Gradient of the loss with respect to every coordinate (row-major `N × d`).
pub fn prefix_loss_grad(
    spec: &KernelSpec,
    weights: &PrefixWeights,
    points: &PointBuffer,
) -> Result<Vec<f64>, DiscError> {
    check(spec, weights, points)?;
    let coeffs = LossCoefficients::new(weights);
    let d = points.dim();
    let mut grad = vec![0.0; points.n_points() * d];
    for (m, g) in grad.chunks_exact_mut(d).enumerate() {
        grad_row(spec, &coeffs, points, m, g);
    }
    Ok(grad)
}

/// Loss and gradient together.
pub fn prefix_loss_and_grad(
    spec: &KernelSpec,
    weights: &PrefixWeights,
    points: &PointBuffer,
) -> Result<(f64, Vec<f64>), DiscError> {
    Ok((
        prefix_loss(spec, weights, points)?,
        prefix_loss_grad(spec, weights, points)?,
    ))
}
