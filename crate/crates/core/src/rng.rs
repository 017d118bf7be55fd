//! Seed derivation for independent random streams.
//!
//! Every random draw in the crate comes from a `ChaCha8Rng` whose seed is a
//! pure function of the master seed and the stream's coordinates (subset
//! index, fold, tree, ...). Results therefore do not depend on evaluation
//! order or on how work is spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream tags keep unrelated consumers of the same master seed apart.
pub mod tag {
    pub const BOOTSTRAP: u64 = 0x6273_7472;
    pub const KFOLD: u64 = 0x6b66_6f6c;
    pub const SUBSAMPLE: u64 = 0x7373_6d70;
    pub const FOREST: u64 = 0x7266_7374;
    pub const TREE: u64 = 0x7472_6565;
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with a list of stream coordinates.
pub fn derive_seed(seed: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(seed), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

pub fn stream(seed: u64, coords: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, coords))
}
