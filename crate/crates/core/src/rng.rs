//! Seed derivation for reproducible parallel sweeps.
//!
//! Every random object is drawn from its own ChaCha stream whose seed is a
//! hash of `(master, stream, index)`, so results do not depend on the order in
//! which workers pick up tasks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tag for disorder realizations.
pub const DISORDER_STREAM: u64 = 0x6469_736f_7264;
/// Stream tag for Haar-random typicality states.
pub const HAAR_STREAM: u64 = 0x6861_6172;
/// Stream tag for initial-state sampling studies.
pub const SAMPLING_STREAM: u64 = 0x7361_6d70;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of item `index` in `stream` from a master seed.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_across_streams_and_indices() {
        let a = derive_seed(42, DISORDER_STREAM, 0);
        assert_ne!(a, derive_seed(42, DISORDER_STREAM, 1));
        assert_ne!(a, derive_seed(42, HAAR_STREAM, 0));
        assert_ne!(a, derive_seed(43, DISORDER_STREAM, 0));
        assert_eq!(a, derive_seed(42, DISORDER_STREAM, 0));
    }
}
