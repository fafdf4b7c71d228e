//! Splittable counter-style generator with explicit seeds and polar-method
//! Gaussian draws. Bit-for-bit reproducibility across runs and across
//! worker partitions is a hard contract here, which is why this is a small
//! fixed algorithm rather than a library generator that may change between
//! versions.

/// SplitMix64: one 64-bit mixing step per draw.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    cached_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed, cached_normal: None }
    }

    /// Stream derived from (seed, index): mixes the index through the
    /// generator so distinct workers draw disjoint streams.
    pub fn derived(seed: u64, index: u64) -> Self {
        let mut base = SplitMix64::new(seed);
        let a = base.next_u64();
        let b = base.next_u64();
        SplitMix64 { state: a ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(b), cached_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1): 53 mantissa bits, never exactly 0.
    pub fn next_uniform(&mut self) -> f64 {
        loop {
            let u = (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Standard normal by the polar (Marsaglia) method.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(v) = self.cached_normal.take() {
            return v;
        }
        loop {
            let x = 2.0 * self.next_uniform() - 1.0;
            let y = 2.0 * self.next_uniform() - 1.0;
            let r2 = x * x + y * y;
            if r2 > 0.0 && r2 < 1.0 {
                let f = (-2.0 * r2.ln() / r2).sqrt();
                self.cached_normal = Some(y * f);
                return x * f;
            }
        }
    }
}
