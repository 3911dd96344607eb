//! Seeding conventions.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`), which is
//! specified bit-for-bit and therefore portable across platforms. A 64-bit
//! seed is expanded with `SeedableRng::seed_from_u64`. Independent
//! substreams are obtained with ChaCha's 64-bit stream selector, and seeds
//! for derived experiments are mixed with [`derive_seed`].
//!
//! Integer draws use `u32` ranges so results do not depend on `usize` width.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a sequence of words:
/// `h = splitmix64(base); for w in words { h = splitmix64(h ^ w) }`.
pub fn derive_seed(base: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(base), |h, &w| splitmix64(h ^ w))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Substream `stream` of the generator seeded by `seed`.
pub fn substream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `round(fraction * n)` with halves rounded up. Shared by every place that
/// turns a fraction of nodes into a count.
pub fn fraction_count(fraction: f64, n: usize) -> usize {
    let k = (fraction * n as f64 + 0.5).floor();
    (k.max(0.0) as usize).min(n)
}
