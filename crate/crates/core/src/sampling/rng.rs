use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::numeric::mul_high;

/// Name of the underlying generator. Golden values in the test suite depend on it.
pub const GENERATOR: &str = "xoshiro256++ (seeded via SplitMix64)";

/// Bits charged for every draw that consumes a whole 64-bit word.
pub const WORD_BITS: u64 = 64;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// Seeded pseudorandom source that counts every bit it hands out.
///
/// Cost model: [`next_bit`](Self::next_bit) costs 1 bit and is served from a
/// buffered 64-bit word, most-significant bit first. Every other draw
/// (biased coins, `Q` variates, clause and index picks) consumes a fresh
/// word and costs 64 bits.
#[derive(Debug, Clone)]
pub struct InstrumentedRng {
    seed: u64,
    inner: Xoshiro256PlusPlus,
    bits_consumed: u64,
    buffer: u64,
    buffered: u32,
}

impl InstrumentedRng {
    pub fn new(seed: u64) -> Self {
        InstrumentedRng {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
            bits_consumed: 0,
            buffer: 0,
            buffered: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total bits charged so far under the cost model.
    pub fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }

    /// One fair bit from the buffer.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.buffered == 0 {
            self.buffer = self.inner.next_u64();
            self.buffered = 64;
        }
        self.buffered -= 1;
        self.bits_consumed += 1;
        (self.buffer >> self.buffered) & 1 == 1
    }

    /// A fresh uniform 64-bit word (does not touch the bit buffer).
    #[inline]
    pub fn next_word(&mut self) -> u64 {
        self.bits_consumed += WORD_BITS;
        self.inner.next_u64()
    }

    /// `true` with probability `q`.
    ///
    /// `q = 1/2` is served by [`next_bit`](Self::next_bit); any other `q`
    /// consumes a word `u` and returns `u / 2^64 < q`, compared exactly.
    #[inline]
    pub fn bernoulli(&mut self, q: f64) -> bool {
        debug_assert!((0.0..=1.0).contains(&q));
        if q == 0.5 {
            return self.next_bit();
        }
        let word = self.next_word();
        word_below(word, q)
    }

    /// `Q ∈ (0, 1]`, `Q = (u + 1) / 2^64` for a uniform word `u`.
    #[inline]
    pub fn uniform_q(&mut self) -> UniformQ {
        UniformQ::from_word(self.next_word())
    }

    /// Uniform index in `0..len` from one word.
    #[inline]
    pub fn uniform_index(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        mul_high(self.next_word(), len as u64) as usize
    }
}

/// Exact test of `word / 2^64 < q`.
#[inline]
pub(crate) fn word_below(word: u64, q: f64) -> bool {
    let scaled = q * TWO_POW_64;
    if scaled >= TWO_POW_64 {
        return true;
    }
    // word < scaled  ⇔  word < ceil(scaled) for integer word
    (word as u128) < scaled.ceil() as u128
}

/// A uniform variate `Q ∈ (0, 1]` held exactly as `numerator / 2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformQ {
    numerator: u128,
}

impl UniformQ {
    pub fn from_word(u: u64) -> Self {
        UniformQ { numerator: u as u128 + 1 }
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / TWO_POW_64
    }

    /// `⌊1/Q⌋`, computed in integer arithmetic and capped at `cap`.
    ///
    /// For an integer counter `ℓ`, `ℓ ≤ 1/Q` holds exactly when `ℓ ≤ ⌊1/Q⌋`.
    pub fn floor_inverse(self, cap: u64) -> u64 {
        let k = (1u128 << 64) / self.numerator;
        k.min(cap as u128) as u64
    }
}
