//! Pinned random number generation.
//!
//! All sampling in this crate uses ChaCha12 (`rand_chacha::ChaCha12Rng`),
//! a portable counter-based generator with stable cross-platform output,
//! seeded from a 64-bit seed. Golden outputs in the test suite rely on this
//! pin; changing the generator is a breaking change.
//!
//! Independent per-trial streams are derived from `(seed, trial_index)`
//! via ChaCha's 64-bit stream counter, so parallel trials never overlap.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The single generator used for one-shot sampling.
pub fn master_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// An independent stream for trial `trial_index` of a Monte Carlo run.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Stream 0 is the master stream; trials live on streams 1, 2, ...
    rng.set_stream(trial_index.wrapping_add(1));
    rng
}
