//! Deterministic stream derivation: every randomized estimator draws from a
//! ChaCha stream addressed by (master seed, subsystem tag, counter), so
//! results do not depend on evaluation order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Subsystem tags keep streams from colliding across modules.
#[derive(Debug, Clone, Copy)]
pub enum StreamTag {
    Density = 1,
    RemezPoints = 2,
    RemezCoeffs = 3,
    AreaCheck = 4,
    GoodDiskVectors = 5,
    SphereSearch = 6,
}

/// A ChaCha8 generator on the stream addressed by `(seed, tag, counter)`.
pub fn stream(seed: u64, tag: StreamTag, counter: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((tag as u64) << 56) ^ counter);
    rng
}
