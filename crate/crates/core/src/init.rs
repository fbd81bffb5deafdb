//! Reproducible random starting points.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};

/// `p` angles uniform on `[0, 2π)`.
///
/// The generator is ChaCha8 (`rand_chacha`) keyed by `seed_from_u64(seed)`,
/// sampled through `rand`'s `Uniform<f64>`. Both are portable, so a given
/// `(p, seed)` yields the same bits on every platform.
pub fn random_init(p: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new(0.0, TAU);
    (0..p).map(|_| dist.sample(&mut rng)).collect()
}
