//! Replicate RNG streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generator for replicate `rep` under master seed `seed`.
///
/// The seed fills the first eight key bytes and `rep` selects the ChaCha
/// stream, so distinct `(seed, rep)` pairs never share a keystream.
pub fn replicate_rng(seed: u64, rep: u64) -> SimRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(rep);
    rng
}
