//! Counter-based random streams.
//!
//! A stream is keyed by `(seed, trial, field)` and yields one uniform per
//! vertex, so vertex `v` of trial `t` always sees the same number no matter
//! which worker runs the trial or which probability the field is cut at.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which independent field a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    /// `X`, the initial occupation.
    Occupation = 0,
    /// `Y`, the enhancement after the catastrophe.
    Enhancement = 1,
    /// An i.i.d. comparison field unrelated to `X` and `Y`.
    Reference = 2,
}

#[derive(Debug, Clone)]
pub struct FieldStream {
    rng: ChaCha8Rng,
}

const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

#[inline]
fn to_unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * UNIT
}

impl FieldStream {
    pub fn new(seed: u64, trial: u64, tag: FieldTag) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&trial.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(tag as u64);
        FieldStream { rng }
    }

    /// Next uniform in `[0, 1)`.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        to_unit(self.rng.next_u64())
    }

    /// Overwrite `out` with the uniforms for vertices `0..out.len()`.
    pub fn fill(&mut self, out: &mut [f64]) {
        self.rng.set_word_pos(0);
        for slot in out {
            *slot = self.next_uniform();
        }
    }

    /// Uniform of vertex `index`, without generating the ones before it.
    pub fn uniform_at(seed: u64, trial: u64, tag: FieldTag, index: usize) -> f64 {
        let mut s = FieldStream::new(seed, trial, tag);
        s.rng.set_word_pos(2 * index as u128);
        s.next_uniform()
    }
}
