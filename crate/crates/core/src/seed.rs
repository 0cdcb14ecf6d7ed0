//! Seed derivation. Every random stream in the crate comes from a base seed
//! and a path of counters (level, run index, repetition, ...), so that runs
//! can be split across threads without changing their results.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type SolverRng = Xoshiro256PlusPlus;

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `base` and a counter path.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(base), |acc, &step| mix(acc ^ mix(step.wrapping_add(0x632b_e59b_d9b4_e019))))
}

pub fn rng_from_seed(seed: u64) -> SolverRng {
    SolverRng::seed_from_u64(seed)
}
