//! Portable pseudo-random stream used by every generator in the crate.
//!
//! The generator is SplitMix64. With state `s` (a `u64`), one step is
//!
//! ```text
//! s  = s + 0x9E3779B97F4A7C15            (wrapping)
//! z  = s
//! z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! Bounded draws use the multiply-high reduction `(out * n) >> 64`, so a
//! stream is reproducible bit for bit from its seed in any language with
//! 128-bit multiplication.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for trial `trial` of a run seeded with `seed`:
    /// the initial state is `mix(seed + (trial + 1) * GOLDEN)`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(mix(seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform-ish draw from `0..n`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Draw from the inclusive range `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
