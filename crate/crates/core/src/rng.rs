//! Seeded random streams.
//!
//! Every generator takes a caller-owned stream. Corpus-level work derives one
//! stream per graph from `(seed, index)` so output does not depend on how
//! graphs are scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The random stream type used throughout the crate.
pub type GraphRng = ChaCha8Rng;

/// Stream for a single run.
pub fn seeded(seed: u64) -> GraphRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream number `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> GraphRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Seed for run number `index` under `seed`, for APIs that take a seed
/// rather than a stream.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).next_u64()
}
