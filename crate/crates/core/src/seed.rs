//! Deterministic seed derivation.
//!
//! Every source of randomness in the toolkit flows from one root seed.
//! Sub-streams are derived by hashing `(root, purpose, index)` with FNV-1a,
//! so adding a new consumer never perturbs existing streams. The scheme is
//! fixed; changing it invalidates recorded run manifests.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a(state: u64, bytes: &[u8]) -> u64 {
    let mut h = state;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Derive the sub-seed for `(purpose, index)` under `root`.
pub fn split_seed(root: u64, purpose: &str, index: u64) -> u64 {
    let h = fnv1a(FNV_OFFSET, &root.to_le_bytes());
    let h = fnv1a(h, purpose.as_bytes());
    fnv1a(h, &index.to_le_bytes())
}

/// Seeded generator for a derived stream.
pub fn stream(root: u64, purpose: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split_seed(root, purpose, index))
}

/// Uniform draw in [0, 1) with 53 bits of precision.
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in [lo, hi).
pub fn uniform_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Uniform integer in [0, n). `n` must be positive.
pub fn uniform_usize(rng: &mut ChaCha8Rng, n: usize) -> usize {
    debug_assert!(n > 0);
    (rng.next_u64() % n as u64) as usize
}

/// Standard normal draw (Box-Muller on the uniform stream).
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = uniform(rng).max(1e-300);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// In-place Fisher-Yates shuffle.
pub fn shuffle<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_usize(rng, i + 1);
        items.swap(i, j);
    }
}
