//! Instrumented randomness and constant-time weighted clause selection.

mod alias;
mod rng;

pub use alias::AliasTable;
pub use rng::{InstrumentedRng, UniformQ, GENERATOR, WORD_BITS};

/// Derives an independent sub-seed from a run seed and a stream tag (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
