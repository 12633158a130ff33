//! Seed derivation. Every random stream hangs off a 64-bit root seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Sub-seed for `(root, label, index)`: the first 8 bytes of
/// `sha256(root_le ‖ label ‖ index_le)`.
pub fn derive_seed(root: u64, label: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    let out = h.finalize();
    let mut b = [0u8; 8];
    b.copy_from_slice(&out[..8]);
    u64::from_le_bytes(b)
}

/// Sub-seed for a two-level index such as `(round, draw)`.
pub fn derive_seed2(root: u64, label: &str, i: u64, j: u64) -> u64 {
    derive_seed(derive_seed(root, label, i), label, j)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hex sha256 digest of arbitrary bytes.
pub fn digest_hex(bytes: &[u8]) -> String {
    let out = Sha256::digest(bytes);
    out.iter().map(|b| format!("{b:02x}")).collect()
}
