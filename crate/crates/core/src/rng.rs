//! Seeded randomness shared by every stochastic component.
//!
//! All randomness flows through [`BenchRng`], a thin wrapper around the
//! ChaCha8 stream cipher generator (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. The derived primitives are implemented here rather than
//! borrowed from `rand`'s distribution code so that the exact draw sequence
//! is pinned down independently of `rand` releases:
//!
//! - [`BenchRng::unit_f64`]: `(next_u64 >> 11) * 2^-53`, uniform on `[0, 1)`.
//! - [`BenchRng::below`]: Lemire's widening-multiply method with rejection,
//!   unbiased on `[0, bound)`.
//! - [`BenchRng::shuffle`]: Fisher–Yates from the last index down.
//! - [`BenchRng::normal`]: Box–Muller, one draw per call (the sine branch is
//!   discarded).
//!
//! Batch jobs derive per-task seeds with [`derive_seed`] (SplitMix64 finalizer
//! over `master ^ golden * (index + 1)`).

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct BenchRng {
    inner: ChaCha8Rng,
}

impl BenchRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`. `bound` must be non-zero.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "below(0) has an empty range");
        let bound = bound as u64;
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.next_u64() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        // 1 - u lies in (0, 1], so the log is finite.
        let u1 = 1.0 - self.unit_f64();
        let u2 = self.unit_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Draws `count` distinct positions from `[0, len)` in sampling order.
    ///
    /// Sparse draws use rejection against the already-chosen set; dense draws
    /// (more than half of the range) run a partial Fisher–Yates over an index
    /// vector. Returns `None` when `count > len`.
    pub fn sample_indices(&mut self, len: usize, count: usize) -> Option<Vec<usize>> {
        if count > len {
            return None;
        }
        if count * 2 <= len {
            let mut chosen = Vec::with_capacity(count);
            let mut seen = std::collections::HashSet::with_capacity(count);
            while chosen.len() < count {
                let i = self.below(len);
                if seen.insert(i) {
                    chosen.push(i);
                }
            }
            Some(chosen)
        } else {
            let mut idx: Vec<usize> = (0..len).collect();
            for i in 0..count {
                let j = i + self.below(len - i);
                idx.swap(i, j);
            }
            idx.truncate(count);
            Some(idx)
        }
    }
}

/// Seed for the `index`-th task of a batch driven by `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
