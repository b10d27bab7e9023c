//! Deterministic random streams.
//!
//! Every stochastic quantity (initial angles, gradient histograms, metric
//! histograms) draws from its own ChaCha stream keyed by the run seed plus a
//! tuple of tags such as `(step, parameter, shift sign)`. Work can therefore
//! be spread over threads, or resumed from a checkpoint, without changing a
//! single sampled bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream purposes; keep the numeric values stable, they are part of the
/// reproducibility contract of saved runs.
pub mod purpose {
    pub const INIT: u64 = 1;
    pub const GRAD_BASE: u64 = 2;
    pub const GRAD_SHIFT: u64 = 3;
    pub const KL: u64 = 4;
    pub const QBAS: u64 = 5;
    pub const DEPLOY_NOISELESS: u64 = 6;
    pub const DEPLOY_NOISY: u64 = 7;
    pub const EVAL: u64 = 8;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds the stream for `seed` and `tags`. Distinct tag tuples give
/// independent streams.
pub fn stream(seed: u64, tags: &[u64]) -> StreamRng {
    let mut state = seed;
    let mut acc = splitmix64(&mut state);
    for &tag in tags {
        state ^= tag.wrapping_mul(0xD6E8_FEB8_6659_FD93).rotate_left(17) ^ acc;
        acc = splitmix64(&mut state);
    }
    // length is mixed in so that (a) and (a, 0) differ
    state ^= tags.len() as u64;
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
