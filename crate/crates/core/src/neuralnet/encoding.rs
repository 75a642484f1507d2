use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::NnError;

/// Sinusoidal index encoding
/// `ψ(i) = [i/N, sin(2^k π i/N), cos(2^k π i/N) : k = 0..K−1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingConfig {
    bands: usize,
    n_norm: u64,
}

impl EncodingConfig {
    pub fn new(bands: usize, n_norm: u64) -> Result<Self, NnError> {
        if bands == 0 || n_norm == 0 {
            return Err(NnError::Encoding);
        }
        Ok(EncodingConfig { bands, n_norm })
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn n_norm(&self) -> u64 {
        self.n_norm
    }

    pub fn width(&self) -> usize {
        1 + 2 * self.bands
    }

    /// Writes `ψ(i)` into `out` (length [`width`](Self::width)).
    ///
    /// The phase `2^k i mod 2N` is reduced in integer arithmetic, so high
    /// bands stay accurate.
    pub fn encode_into(&self, i: u64, out: &mut [f64]) {
        assert_eq!(out.len(), self.width());
        let n = self.n_norm as u128;
        let period = 2 * n;
        out[0] = i as f64 / self.n_norm as f64;
        let mut phase = i as u128 % period;
        for k in 0..self.bands {
            let angle = PI * phase as f64 / n as f64;
            out[1 + 2 * k] = libm::sin(angle);
            out[2 + 2 * k] = libm::cos(angle);
            phase = (2 * phase) % period;
        }
    }

    pub fn encode(&self, i: u64) -> Vec<f64> {
        let mut out = vec![0.0; self.width()];
        self.encode_into(i, &mut out);
        out
    }
}
