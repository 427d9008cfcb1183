//! Named, index-addressable random streams derived from one root seed.
//!
//! A sub-stream seed is
//! `splitmix64(splitmix64(root ^ fnv1a64(name)) + index)`, and the stream
//! itself is ChaCha8 seeded with that value. Results therefore depend only on
//! (root seed, stream name, index), never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const PLACEMENT: &str = "placement";
pub const CLUTTER_PHASE: &str = "clutter-phase";
pub const STATISTICAL_CSI: &str = "optimizer-statistical-csi";

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    root: u64,
}

impl RngStream {
    pub fn new(root: u64) -> Self {
        Self { root }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn sub_seed(&self, name: &str, index: u64) -> u64 {
        splitmix64(splitmix64(self.root ^ fnv1a64(name)).wrapping_add(index))
    }

    pub fn stream(&self, name: &str, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.sub_seed(name, index))
    }
}
