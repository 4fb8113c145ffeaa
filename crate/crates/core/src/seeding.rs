//! Deterministic seed derivation.
//!
//! Every run owns one 64-bit seed derived from the experiment's root seed,
//! the benchmark name, a policy stream id and the run index. Inside a run,
//! each step gets its own generator seeded from the run seed and the step
//! index, so the random draws of step `s` do not depend on how many numbers
//! earlier steps consumed.
//!
//! Mixing uses FNV-1a (64-bit) for strings and the SplitMix64 finalizer for
//! integers. Generators are ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every stochastic operation in the crate.
pub type StreamRng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// Seed of run `index` for `(benchmark, stream)` under `root`.
pub fn run_seed(root: u64, benchmark: &str, stream: &str, index: u64) -> u64 {
    let mut h = splitmix64(root ^ fnv1a(benchmark.as_bytes()));
    h = splitmix64(h ^ fnv1a(stream.as_bytes()));
    splitmix64(h ^ splitmix64(index))
}

/// Generator for step `step` of the run seeded with `run_seed`.
pub fn step_rng(run_seed: u64, step: u64) -> StreamRng {
    StreamRng::seed_from_u64(splitmix64(run_seed ^ splitmix64(step.wrapping_add(1))))
}
