//! Counter-based random streams.
//!
//! Every pair of views is generated from its own [`PairStream`], keyed by
//! `(base_seed, index)`. The n-th output of a stream is a pure function of
//! `(key, n)`, so entry `k` of a batch never depends on whether entries
//! `0..k` were generated, and batches can be split across threads freely.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const INDEX_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// The SplitMix64 / MurmurHash3 64-bit finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the substream key for one pair.
#[inline]
pub fn stream_key(base_seed: u64, index: u64) -> u64 {
    mix64(mix64(base_seed) ^ mix64(index.wrapping_mul(INDEX_SALT).wrapping_add(GOLDEN_GAMMA)))
}

/// A keyed counter generator: output `n` is `mix64(key + (n + 1) * gamma)`
/// post-mixed with the key, so two keys never produce shifted copies of
/// each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStream {
    key: u64,
    counter: u64,
}

impl PairStream {
    pub fn new(base_seed: u64, index: u64) -> Self {
        Self::from_key(stream_key(base_seed, index))
    }

    pub fn from_key(key: u64) -> Self {
        Self { key, counter: 0 }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let x = self
            .key
            .wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA));
        mix64(mix64(x) ^ self.key.rotate_left(29))
    }

    /// A uniform draw on the open interval (0, 1): the centre of one of
    /// 2^52 equal cells.
    ///
    /// Never returns exactly 0 or 1, which the inverse-CDF samplers rely on.
    /// (With 53 bits the top cell centre would round up to 1.0.)
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
        ((self.next_u64() >> 12) as f64 + 0.5) * SCALE
    }

    /// Uniform integer on `0..=max`.
    #[inline]
    pub fn next_inclusive(&mut self, max: u32) -> u32 {
        uniform_index(self.next_open01(), max)
    }
}

/// Maps a unit draw to an integer on `0..=max`.
#[inline]
pub fn uniform_index(u: f64, max: u32) -> u32 {
    let span = f64::from(max) + 1.0;
    ((u * span) as u32).min(max)
}
