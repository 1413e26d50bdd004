//! Counter-based random streams.
//!
//! A stream is identified by `(seed, namespace, a, b)` and seeded directly
//! from those words, so any draw can be reproduced without replaying the
//! draws before it. Harness and oracle code use different namespaces.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const HARNESS_NAMESPACE: u64 = 0x6861_726e_6573_7300;
pub const ORACLE_NAMESPACE: u64 = 0x6f72_6163_6c65_0000;

pub fn stream_rng(seed: u64, namespace: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([seed, namespace, a, b]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Circularly-symmetric CN(0, variance): real and imaginary parts each N(0, variance / 2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex<f64> {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(s * re, s * im)
}
