//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit `u64` seed. Independent
//! substreams are derived from `(seed, stream)` pairs using ChaCha's native
//! stream counter, so parallel callers never share state and a run is fully
//! determined by its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// The generator for substream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Shorthand for substream 0.
pub fn seeded(seed: u64) -> Rng {
    stream(seed, 0)
}
