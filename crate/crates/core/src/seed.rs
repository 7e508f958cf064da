//! Seed derivation for reproducible, parallel experiments.
//!
//! Every experiment is driven by a single `master_seed`. Trial `i` draws its
//! randomness from `ChaCha8Rng::seed_from_u64(child_seed(master_seed, i))`,
//! where `child_seed` is two rounds of SplitMix64 over the pair. A trial's
//! stream therefore depends only on `(master_seed, i)`: growing the number
//! of trials never changes the records of earlier trials, and trials may run
//! on any worker in any order.
//!
//! Sub-streams inside a trial (e.g. the sampler vs. the challenge) use
//! [`child_seed`] again with a small fixed tag.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output step applied to `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child stream of `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index.wrapping_mul(GOLDEN).rotate_left(17) ^ index)
}

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn child_rng(master: u64, index: u64) -> TrialRng {
    rng_from_seed(child_seed(master, index))
}
