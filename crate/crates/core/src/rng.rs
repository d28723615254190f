//! Deterministic PRNG substream derivation.
//!
//! All randomness in the pipeline flows from a single `u64` seed. Workers
//! (locations, trees, folds, trials, instances) derive independent
//! substreams from `(seed, salt)` so that parallel and serial execution
//! orders produce bit-identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; decorrelates nearby seed/salt values.
fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Mix a base seed with a stream salt into a fresh 64-bit seed.
pub fn mix(seed: u64, salt: u64) -> u64 {
    splitmix(splitmix(seed).wrapping_add(splitmix(salt)))
}

/// A substream keyed by `(seed, salt)`.
pub fn substream(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, salt))
}

/// A substream keyed by `(seed, salt_a, salt_b)`; used when a worker is
/// addressed by two coordinates (e.g. repeat and location).
pub fn substream2(seed: u64, salt_a: u64, salt_b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(mix(seed, salt_a), salt_b))
}
