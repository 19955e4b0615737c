//! Fixed, documented pseudo-random generator for the instance generators.
//!
//! Generated instances must be byte-identical for the same seed on every
//! platform and toolchain, forever. That rules out any external RNG whose
//! stream is not part of its stability contract, so this module pins the
//! whole pipeline: SplitMix64 for raw 64-bit output, multiply-free rejection
//! sampling for bounded draws, and Fisher-Yates for shuffles.

/// SplitMix64: a counter advanced by a fixed odd constant, finalized by an
/// avalanche mix. Constants are the ones published with the algorithm.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    /// Seeds a named stream so different uses of the same user seed do not
    /// share a sequence. The tag is folded in with FNV-1a.
    pub fn for_stream(seed: u64, tag: &str) -> SplitMix64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in tag.bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        SplitMix64::new(seed ^ hash)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[lo, hi]` inclusive, by rejection: raw outputs
    /// above the largest multiple of the range size are discarded, so every
    /// value is exactly equally likely.
    pub fn uniform(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi, "empty range [{lo}, {hi}]");
        let span = hi - lo + 1; // wraps to 0 for the full u64 range
        if span == 0 {
            return self.next_u64();
        }
        let zone = u64::MAX - (u64::MAX % span);
        loop {
            let raw = self.next_u64();
            if raw < zone {
                return lo + raw % span;
            }
        }
    }

    /// Draws `count` distinct values from `[lo, hi]`, in draw order.
    ///
    /// Panics if the range holds fewer than `count` values.
    pub fn distinct(&mut self, count: usize, lo: u64, hi: u64) -> Vec<u64> {
        assert!(
            (count as u128) <= (hi as u128 - lo as u128 + 1),
            "cannot draw {count} distinct values from [{lo}, {hi}]"
        );
        let mut seen = std::collections::HashSet::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        while values.len() < count {
            let value = self.uniform(lo, hi);
            if seen.insert(value) {
                values.push(value);
            }
        }
        values
    }

    /// Fisher-Yates shuffle, iterating from the back.
    pub fn shuffle<T>(&mut self, values: &mut [T]) {
        for i in (1..values.len()).rev() {
            let j = self.uniform(0, i as u64) as usize;
            values.swap(i, j);
        }
    }
}
