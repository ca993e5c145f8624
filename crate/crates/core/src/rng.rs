//! Seeded random streams.
//!
//! All randomness in the crate comes from `ChaCha8Rng` seeded through
//! `seed_from_u64`. Independent sub-streams (for example one per generated
//! sample) use seeds derived by [`derive_seed`], a SplitMix64 mix of the
//! master seed and the stream index, so a sample's randomness depends only on
//! `(master, index)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sub-stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}
