use core::f64::consts::PI;

use super::BenchError;

/// Parameter names in argument order.
pub const BOREHOLE_PARAMS: [&str; 8] = ["r_w", "r", "T_u", "H_u", "T_l", "H_l", "L", "K_w"];

/// Uniform input ranges `[lo, hi]` for `(r_w, r, T_u, H_u, T_l, H_l, L, K_w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoreholeSpec {
    pub ranges: [(f64, f64); 8],
}

impl Default for BoreholeSpec {
    fn default() -> Self {
        BoreholeSpec {
            ranges: [
                (0.05, 0.15),
                (100.0, 50000.0),
                (63070.0, 115600.0),
                (990.0, 1110.0),
                (63.1, 116.0),
                (700.0, 820.0),
                (1120.0, 1680.0),
                (9855.0, 12045.0),
            ],
        }
    }
}

impl BoreholeSpec {
    /// Maps a point of the unit cube to physical parameters.
    pub fn to_physical(&self, u: &[f64]) -> [f64; 8] {
        let mut p = [0.0; 8];
        for ((p, &(lo, hi)), &u) in p.iter_mut().zip(&self.ranges).zip(u) {
            *p = lo + (hi - lo) * u;
        }
        p
    }
}

/// Flow rate for physical parameters `(r_w, r, T_u, H_u, T_l, H_l, L, K_w)`.
pub fn borehole_physical(p: &[f64; 8]) -> f64 {
    let [rw, r, tu, hu, tl, hl, l, kw] = *p;
    let log_ratio = libm::log(r / rw);
    2.0 * PI * tu * (hu - hl) / (log_ratio * (1.0 + 2.0 * l * tu / (log_ratio * rw * rw * kw) + tu / tl))
}

/// Flow rate at `u ∈ [0,1]^8`, mapped affinely onto `spec`'s ranges.
pub fn borehole(u: &[f64], spec: &BoreholeSpec) -> Result<f64, BenchError> {
    if u.len() != 8 {
        return Err(BenchError::DimensionMismatch {
            expected: 8,
            found: u.len(),
        });
    }
    Ok(borehole_physical(&spec.to_physical(u)))
}
