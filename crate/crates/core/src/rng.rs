//! Seeded, splittable randomness.
//!
//! Every randomized operation in this crate takes an explicit 64-bit seed and
//! draws from a counter-based stream cipher (ChaCha8), so any run can be
//! replayed bit for bit. Parallel trials never share a stream: trial `t` of a
//! run with master seed `s` uses `child_seed(s, t)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The sampling range for exact-integer probe entries, `{1, ..., 2^20}`.
///
/// Replaces "probability one" Gaussian arguments by Schwartz-Zippel sampling:
/// each bad equality event has probability at most 2^-20 while arithmetic
/// stays exact.
pub const PROBE_RANGE: i128 = 1 << 20;

/// The per-trial generator. Counter-based, so seeking and replay are cheap.
pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    TrialRng::seed_from_u64(seed)
}

/// Derives a child seed from a master seed and a trial index.
///
/// SplitMix64-style finalizer over the pair; statistically independent
/// streams for distinct indices, stable across platforms.
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ mix(index.wrapping_add(0x9e37_79b9_7f4a_7c15));
    z = mix(z);
    z
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform probe entry from `{1, ..., 2^20}`.
pub fn probe_int(rng: &mut TrialRng) -> i128 {
    rng.random_range(1..=PROBE_RANGE)
}

/// Uniformly random `k`-subset of `{0, ..., n-1}` via partial Fisher-Yates.
pub fn sample_subset(rng: &mut TrialRng, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "subset size exceeds ground set");
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}
