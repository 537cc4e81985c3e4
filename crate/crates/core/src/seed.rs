//! Labelled seed derivation.
//!
//! Every random stream in an experiment is seeded by
//! `first 8 bytes (little endian) of SHA-256(root_seed as 8 LE bytes ‖ label)`,
//! so adding a new labelled stream never shifts an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn derive_seed(root: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(label.as_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
}

/// Generator for a seed; ChaCha8 keeps streams identical across platforms.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labelled_rng(root: u64, label: &str) -> ChaCha8Rng {
    rng(derive_seed(root, label))
}
