//! Seeded randomness for reproducible runs.
//!
//! Every run owns one ChaCha8 stream seeded from a 64-bit value. ChaCha8 output
//! is specified independently of platform and word size, so a seed reproduces
//! the same search on any machine.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type QapRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> QapRng {
    ChaCha8Rng::seed_from_u64(seed)
}
