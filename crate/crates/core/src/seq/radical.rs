use alloc::vec;
use alloc::vec::Vec;

/// Base-`b` radical inverse: the digits of `i` mirrored about the radix point.
pub fn radical_inverse(i: u64, base: u64) -> f64 {
    assert!(base >= 2, "radical inverse base must be at least 2");
    // Exact path: reversed digits over base^m, both representable in 53 bits.
    let mut reversed: u64 = 0;
    let mut denom: u64 = 1;
    let mut k = i;
    while k > 0 {
        let (Some(r), Some(d)) = (
            reversed.checked_mul(base).and_then(|r| r.checked_add(k % base)),
            denom.checked_mul(base),
        ) else {
            return radical_inverse_float(i, base);
        };
        if d > (1u64 << 53) {
            return radical_inverse_float(i, base);
        }
        reversed = r;
        denom = d;
        k /= base;
    }
    reversed as f64 / denom as f64
}

fn radical_inverse_float(i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    let mut k = i;
    while k > 0 {
        acc += (k % base) as f64 * scale;
        scale *= inv;
        k /= base;
    }
    // Rounding can push the sum to exactly 1.0 for huge indices.
    acc.min(1.0 - f64::EPSILON / 2.0)
}

/// The first `n` primes, by a sieve sized from the prime-counting bound.
pub fn first_primes(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut limit = if n < 6 {
        15
    } else {
        let nf = n as f64;
        (nf * (libm::log(nf) + libm::log(libm::log(nf)))) as usize + 3
    };
    loop {
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::with_capacity(n);
        for p in 2..=limit {
            if composite[p] {
                continue;
            }
            primes.push(p as u64);
            if primes.len() == n {
                return primes;
            }
            let mut m = p * p;
            while m <= limit {
                composite[m] = true;
                m += p;
            }
        }
        limit *= 2;
    }
}

/// Halton generator with its prime bases sieved once at construction.
#[derive(Debug, Clone)]
pub struct Halton {
    bases: Vec<u64>,
}

impl Halton {
    pub fn new(dim: usize) -> Self {
        Halton {
            bases: first_primes(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.bases.len()
    }

    pub fn point_into(&self, i: u64, out: &mut [f64]) {
        for (x, &b) in out.iter_mut().zip(&self.bases) {
            *x = radical_inverse(i, b);
        }
    }
}

/// Point `i` of the `dim`-dimensional Halton sequence.
pub fn halton_point(i: u64, dim: usize) -> Vec<f64> {
    let h = Halton::new(dim);
    let mut out = vec![0.0; dim];
    h.point_into(i, &mut out);
    out
}
