//! Counter-based hashing used for scrambling, the uniform baseline and
//! seed splitting.

/// SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word.
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Derives an independent sub-seed for `stream` from a master seed.
///
/// `split_seed(seed, k) = mix64(seed + (k + 1) * 0x9e3779b97f4a7c15)`, the
/// `k`-th output of a SplitMix64 generator started at `seed`.
#[inline]
pub const fn split_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Hash of three words, used as a counter-based random function.
#[inline]
pub const fn hash3(a: u64, b: u64, c: u64) -> u64 {
    mix64(mix64(mix64(a ^ GOLDEN).wrapping_add(b)) ^ c.wrapping_mul(GOLDEN))
}

/// Maps the top 53 bits of a word to a double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Coordinate `dim` of point `index` of the counter-based uniform sequence.
#[inline]
pub fn uniform_coordinate(seed: u64, index: u64, dim: usize) -> f64 {
    unit_f64(hash3(seed, index, dim as u64))
}
