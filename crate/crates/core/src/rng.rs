//! Seed derivation for independent, reproducible random streams.
//!
//! Every trial, restart and bootstrap replicate draws from its own ChaCha
//! stream whose seed is a pure function of the parent seed and a stream index,
//! so results never depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a parent seed with a stream index into a child seed.
pub fn derive_seed(parent: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn stream_rng(parent: u64, stream: u64) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(parent, stream))
}

pub fn seeded_rng(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}
