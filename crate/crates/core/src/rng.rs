//! Random streams and the few uniform draws the samplers need.
//!
//! Every trajectory owns an independent ChaCha8 stream keyed by
//! `(seed, trajectory index)`, so a batch is reproducible no matter how the
//! indices are distributed over workers.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub use rand_chacha::ChaCha8Rng as StreamRng;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// Independent stream for trajectory `index` of a run seeded with `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

const SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Uniform on `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * SCALE
}

/// Uniform on `(0, 1]`.
#[inline]
pub fn uniform_pos<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * SCALE
}

/// Uniform on `[-1, 1)`.
#[inline]
pub fn uniform_sym<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    2.0 * uniform(rng) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: [u64; 4] = core::array::from_fn(|_| trajectory_rng(7, 3).next_u64());
        assert!(a.iter().all(|x| *x == a[0]));
        let mut r3 = trajectory_rng(7, 3);
        let mut r4 = trajectory_rng(7, 4);
        assert_ne!(r3.next_u64(), r4.next_u64());
    }

    #[test]
    fn uniform_ranges() {
        let mut rng = trajectory_rng(1, 0);
        for _ in 0..10_000 {
            let u = uniform(&mut rng);
            assert!((0.0..1.0).contains(&u));
            let v = uniform_pos(&mut rng);
            assert!(v > 0.0 && v <= 1.0);
        }
    }
}
