//! Counter-based pseudo-random stream.
//!
//! Every variate is a pure function of `(seed, stream, counter)`, so a batch
//! can be filled in any order — or from any number of worker threads — and
//! still come out bit-identical. The generator is the splitmix64 finalizer
//! applied to a Weyl sequence, keyed per stream.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-stream identifiers. The values are part of the deterministic-output
/// contract; never renumber them.
pub(crate) mod stream {
    pub const COORDINATES: u64 = 0;
    pub const SPARSE_SUPPORT: u64 = 1;
    /// Base for sphere resampling; attempt `k` uses `SPHERE_RETRY + k`.
    pub const SPHERE_RETRY: u64 = 0x5350_4845;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct CounterStream {
    key: u64,
}

impl CounterStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix(mix(seed ^ GOLDEN) ^ stream.wrapping_mul(0xA24B_AED4_963E_E407));
        CounterStream { key }
    }

    #[inline]
    pub fn bits_at(&self, counter: u64) -> u64 {
        mix(self.key.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform variate in `[0, 1)` built from the top 53 bits.
    #[inline]
    pub fn uniform_at(&self, counter: u64) -> f64 {
        (self.bits_at(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`; 64-bit modulo, whose bias is below
    /// 2⁻³² for any bound this crate uses.
    #[inline]
    pub fn below_at(&self, counter: u64, bound: u64) -> u64 {
        self.bits_at(counter) % bound
    }
}

/// Derive an independent child seed, e.g. to give each audit λ its own
/// endpoint batches.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix(mix(seed ^ 0xD605_1C87_45F1_9E23) ^ tag.wrapping_mul(GOLDEN))
}
