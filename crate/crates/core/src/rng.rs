//! Seeded noise streams.
//!
//! Every random draw in the crate comes from ChaCha20 (`rand_chacha`), keyed
//! by a 64-bit seed through `SeedableRng::seed_from_u64` and split into
//! independent streams with the cipher's 64-bit stream id. Gaussian variates
//! use the ziggurat sampler of `rand_distr::StandardNormal`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

/// Stream purposes mixed into the low byte of the stream id.
pub mod purpose {
    pub const INIT: u64 = 1;
    pub const LEARN: u64 = 2;
    pub const REQUEST: u64 = 3;
    pub const UNLEARN: u64 = 4;
    pub const RETRAIN: u64 = 5;
    pub const DATA: u64 = 6;
    pub const TEST_DATA: u64 = 7;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Stream for one purpose of one trial: `(trial << 8) | purpose`.
    pub fn for_trial(seed: u64, trial: u64, purpose: u64) -> Self {
        debug_assert!(purpose < 256);
        Self {
            seed,
            stream: (trial << 8) | purpose,
        }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Overwrite `out` with independent standard normal draws.
pub fn fill_standard_normal<R: rand::Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out {
        *v = StandardNormal.sample(rng);
    }
}
