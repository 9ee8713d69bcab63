//! Seeded generator shared by every sampler.
//!
//! ChaCha8 from `rand_chacha`, seeded through `SeedableRng::seed_from_u64`.
//! The stream for a given seed is stable across platforms, which keeps the
//! simulation outputs and the acceptance runs bit-reproducible.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform deviate on the open interval (0, 1): the 53-bit grid shifted by
/// half a step, so neither endpoint can occur.
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}
