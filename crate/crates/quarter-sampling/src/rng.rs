//! Deterministic pseudo-random generator used everywhere randomness is
//! needed.
//!
//! Mask sets must be reproducible across runs, platforms, and dependency
//! upgrades, so the generator is pinned here rather than taken from an
//! external crate: SplitMix64 (Steele, Lea & Flood 2014), seeded directly
//! with the user-supplied 64-bit seed. The golden tests in `mask` freeze
//! its output.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 over a 64-bit state.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform draw from {0, 1, 2, 3}, taken from the top bits (the
    /// weakest SplitMix64 bits are the low ones).
    pub fn next_quadrant(&mut self) -> u8 {
        (self.next_u64() >> 62) as u8
    }

    /// Uniform f64 in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform usize in [0, bound) via 128-bit multiply (no modulo bias
    /// worth caring about at these bounds).
    pub fn next_below(&mut self, bound: usize) -> usize {
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of a named sub-stream from a master seed.
///
/// Used by the benchmark harness so that e.g. the mask stream for b = 8 is
/// independent of the stream for b = 4 while both stay a pure function of
/// the master seed.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    mix(mix(master.wrapping_add(GOLDEN_GAMMA)) ^ tag)
}
