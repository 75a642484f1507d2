use alloc::vec;
use alloc::vec::Vec;

use super::BenchError;

/// Standard normal CDF, `Φ(x) = erfc(−x/√2) / 2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// European geometric-average basket call under multivariate geometric
/// Brownian motion `dS_i = r S_i dt + S_i Σ_j σ_ij dW_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketOptionSpec {
    pub dim: usize,
    /// Volatility matrix, row-major `d × d`.
    pub sigma: Vec<f64>,
    pub maturity: f64,
    pub strike: f64,
    pub rate: f64,
}

impl BasketOptionSpec {
    /// `σ = 10⁻⁵ I`, `T = 5`, `K = 0.08`, `r = 0.05`.
    pub fn default_for(dim: usize) -> Self {
        let mut sigma = vec![0.0; dim * dim];
        for i in 0..dim {
            sigma[i * dim + i] = 1e-5;
        }
        BasketOptionSpec {
            dim,
            sigma,
            maturity: 5.0,
            strike: 0.08,
            rate: 0.05,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.dim == 0 || self.sigma.len() != self.dim * self.dim {
            return Err(BenchError::BasketSpec("sigma must be a d × d matrix"));
        }
        if !(self.maturity > 0.0) || !(self.strike >= 0.0) || !self.rate.is_finite() {
            return Err(BenchError::BasketSpec("need T > 0, K ≥ 0 and finite r"));
        }
        Ok(())
    }

    fn sigma(&self, i: usize, j: usize) -> f64 {
        self.sigma[i * self.dim + j]
    }

    /// Standard deviation of `log G(T)` for the geometric mean `G`:
    /// `ν = (1/d) √(T Σ_j (Σ_i σ_ij)²)`.
    pub fn nu(&self) -> f64 {
        let d = self.dim;
        let s: f64 = (0..d)
            .map(|j| {
                let c: f64 = (0..d).map(|i| self.sigma(i, j)).sum();
                c * c
            })
            .sum();
        libm::sqrt(self.maturity * s) / d as f64
    }

    /// Drift of `log(G(T)/s̃)`: `m = rT − (T/2d) Σ_ij σ_ij²`.
    pub fn m(&self) -> f64 {
        let s: f64 = self.sigma.iter().map(|v| v * v).sum();
        self.rate * self.maturity - self.maturity * s / (2.0 * self.dim as f64)
    }
}

/// Price at `t = 0`: `e^{−rT}(s̃ e^{m̃} Φ(d₁) − K Φ(d₂))` with
/// `s̃ = (Π S_i)^{1/d}`, `m̃ = m + ν²/2`, `d₁ = (ln(s̃/K) + m + ν²)/ν`,
/// `d₂ = d₁ − ν`.
pub fn basket_price(s: &[f64], spec: &BasketOptionSpec) -> Result<f64, BenchError> {
    spec.validate()?;
    if s.len() != spec.dim {
        return Err(BenchError::DimensionMismatch {
            expected: spec.dim,
            found: s.len(),
        });
    }
    if s.iter().any(|&v| !(v > 0.0)) {
        return Err(BenchError::NonPositivePrice);
    }
    let d = spec.dim as f64;
    let s_tilde = libm::exp(s.iter().map(|&v| libm::log(v)).sum::<f64>() / d);
    let nu = spec.nu();
    let m = spec.m();
    let discount = libm::exp(-spec.rate * spec.maturity);
    let k = spec.strike;
    if nu == 0.0 {
        return Ok(discount * (s_tilde * libm::exp(m) - k).max(0.0));
    }
    let m_tilde = m + 0.5 * nu * nu;
    let d1 = (libm::log(s_tilde / k) + m + nu * nu) / nu;
    let d2 = d1 - nu;
    let price = discount * (s_tilde * libm::exp(m_tilde) * normal_cdf(d1) - k * normal_cdf(d2));
    Ok(price.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// `Φ` on the grid `−8 + 16k/10⁴` by cumulative composite Simpson
    /// integration of the density outward from zero.
    fn cdf_table() -> Vec<(f64, f64)> {
        let n = 10_000;
        let h = 16.0 / n as f64;
        let pdf = |t: f64| libm::exp(-0.5 * t * t) / libm::sqrt(2.0 * core::f64::consts::PI);
        let simpson = |a: f64, b: f64| {
            let m = 16;
            let w = (b - a) / m as f64;
            let mut s = pdf(a) + pdf(b);
            for i in 1..m {
                s += pdf(a + i as f64 * w) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * w / 3.0
        };
        let mid = n / 2;
        let mut table = vec![(0.0, 0.0); n + 1];
        table[mid] = (0.0, 0.5);
        for k in mid + 1..=n {
            let (a, b) = (-8.0 + (k - 1) as f64 * h, -8.0 + k as f64 * h);
            table[k] = (b, table[k - 1].1 + simpson(a, b));
        }
        for k in (0..mid).rev() {
            let (a, b) = (-8.0 + k as f64 * h, -8.0 + (k + 1) as f64 * h);
            table[k] = (a, table[k + 1].1 - simpson(a, b));
        }
        table
    }

    #[test]
    fn cdf_matches_quadrature_table() {
        for (x, phi) in cdf_table() {
            assert!((normal_cdf(x) - phi).abs() < 1e-12, "{x}: {} vs {phi}", normal_cdf(x));
        }
        assert_eq!(normal_cdf(0.0), 0.5);
    }

    fn mc_price(s: &[f64], spec: &BasketOptionSpec, paths: usize, seed: u64) -> (f64, f64) {
        let d = spec.dim;
        let t = spec.maturity;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = vec![0.0; d];
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..paths {
            z.iter_mut().for_each(|v| *v = rng.sample::<f64, _>(StandardNormal));
            let mut log_g = 0.0;
            for (i, &s_i) in s.iter().enumerate() {
                let row = &spec.sigma[i * d..(i + 1) * d];
                let drift = (spec.rate - 0.5 * row.iter().map(|v| v * v).sum::<f64>()) * t;
                let shock: f64 = row.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() * libm::sqrt(t);
                log_g += (libm::log(s_i) + drift + shock) / d as f64;
            }
            let payoff = (libm::exp(log_g) - spec.strike).max(0.0);
            sum += payoff;
            sum2 += payoff * payoff;
        }
        let n = paths as f64;
        let mean = sum / n;
        let se = libm::sqrt((sum2 / n - mean * mean) / n);
        let disc = libm::exp(-spec.rate * t);
        (disc * mean, disc * se)
    }

    #[test]
    fn matches_simulation_with_real_volatility() {
        let mut spec = BasketOptionSpec::default_for(2);
        spec.sigma = vec![0.3, 0.05, 0.1, 0.2];
        spec.strike = 0.5;
        let s = [0.6, 0.45];
        let exact = basket_price(&s, &spec).unwrap();
        let (mc, se) = mc_price(&s, &spec, 200_000, 17);
        assert!((exact - mc).abs() < 4.0 * se, "{exact} vs {mc} ± {se}");
    }

    #[test]
    fn default_spec_matches_simulation() {
        let spec = BasketOptionSpec::default_for(2);
        let s = [0.7, 0.3];
        let exact = basket_price(&s, &spec).unwrap();
        let (mc, _) = mc_price(&s, &spec, 20_000, 3);
        assert!((exact - mc).abs() < 5e-4 * exact);
    }

    #[test]
    fn zero_strike_limit() {
        let mut spec = BasketOptionSpec::default_for(3);
        spec.sigma = vec![0.2, 0.0, 0.0, 0.0, 0.1, 0.0, 0.05, 0.0, 0.3];
        spec.strike = 0.0;
        let s = [0.5, 0.8, 0.2];
        let s_tilde = libm::cbrt(0.5 * 0.8 * 0.2);
        let expect =
            libm::exp(-spec.rate * spec.maturity) * s_tilde * libm::exp(spec.m() + 0.5 * spec.nu() * spec.nu());
        let got = basket_price(&s, &spec).unwrap();
        assert!((got - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn monotone_and_bounded() {
        let mut spec = BasketOptionSpec::default_for(2);
        spec.sigma = vec![0.25, 0.0, 0.0, 0.25];
        let mut prev = 0.0;
        for k in 1..=40 {
            let s = [k as f64 / 40.0, 0.5];
            let p = basket_price(&s, &spec).unwrap();
            assert!(p >= prev);
            let s_tilde = libm::sqrt(s[0] * s[1]);
            let cap =
                libm::exp(-spec.rate * spec.maturity) * s_tilde * libm::exp(spec.m() + 0.5 * spec.nu() * spec.nu());
            assert!(p >= 0.0 && p <= cap * (1.0 + 1e-15));
            prev = p;
        }
    }

    #[test]
    fn rejects_bad_input() {
        let spec = BasketOptionSpec::default_for(2);
        assert_eq!(basket_price(&[0.5, 0.0], &spec), Err(BenchError::NonPositivePrice));
        assert!(basket_price(&[0.5], &spec).is_err());
        let mut bad = spec.clone();
        bad.sigma.pop();
        assert!(basket_price(&[0.5, 0.5], &bad).is_err());
    }
}
