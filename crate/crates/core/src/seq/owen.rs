use alloc::vec::Vec;

use super::sobol::{fraction, SOBOL_BITS};
use crate::hash::{hash3, mix64};
use crate::points::PointBuffer;

/// Owen nested uniform scrambling of one 32-bit binary fraction.
///
/// Bit `k` (counted from the most significant) is flipped by a hash of the
/// seed, the coordinate index and the `k` original bits above it, so two
/// inputs sharing a prefix receive identical flips on that prefix's
/// subtree. No tree is stored.
pub fn owen_scramble_u32(x: u32, dim: usize, seed: u64) -> u32 {
    let dim_key = mix64(seed ^ (dim as u64).wrapping_mul(0xd1b5_4a32_d192_ed03));
    let mut out = 0u32;
    for k in 0..SOBOL_BITS {
        let prefix = if k == 0 { 0 } else { u64::from(x >> (SOBOL_BITS - k)) };
        // Heap numbering makes the node id unique across depths.
        let node = (1u64 << k) | prefix;
        let flip = (hash3(dim_key, node, seed) >> 63) as u32;
        let bit = (x >> (SOBOL_BITS - 1 - k)) & 1;
        out |= (bit ^ flip) << (SOBOL_BITS - 1 - k);
    }
    out
}

/// Scrambles a row-major buffer of raw 32-bit digital points.
pub fn owen_scramble(raw: &[u32], dim: usize, seed: u64) -> PointBuffer {
    assert!(dim >= 1 && raw.len() % dim == 0, "raw buffer must hold whole points");
    let coords: Vec<f64> = raw
        .iter()
        .enumerate()
        .map(|(idx, &x)| fraction(owen_scramble_u32(x, idx % dim, seed)))
        .collect();
    PointBuffer::from_flat(raw.len() / dim, dim, coords).expect("fractions lie in [0, 1)")
}
