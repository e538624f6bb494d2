//! SplitMix64, the only randomness source in the crate.
//!
//! The generator is part of the output contract: seeded flags, erasure
//! patterns and simulation reports must be reproducible bit for bit on any
//! platform, so the recurrence is spelled out here rather than delegated to a
//! crate whose stream may change between versions.
//!
//! * state advances by `0x9E3779B97F4A7C15` per draw;
//! * output is `mix64(state)`, with
//!   `z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9; z = (z ^ z >> 27) * 0x94D049BB133111EB; z ^ z >> 31`;
//! * `below(n)` is the high word of the 128-bit product `next_u64() * n`;
//! * `next_f64()` is `(next_u64() >> 11) * 2^-53`;
//! * `derive(seed, i)` seeds a child stream with `mix64(seed + mix64(i + 1))`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent child stream for item `index` of a run seeded with `seed`.
    pub fn derive(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix64(seed.wrapping_add(mix64(index.wrapping_add(1)))))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform-ish integer in `[0, n)`; `n` must be positive.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `count` distinct indices from `[0, n)` via a partial Fisher-Yates shuffle.
    pub fn sample_distinct(&mut self, n: usize, count: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        let count = count.min(n);
        for i in 0..count {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }
}
