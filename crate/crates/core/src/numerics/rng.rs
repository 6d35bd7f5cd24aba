//! Reproducible normal variates.
//!
//! Generator: ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`), keyed by
//! `seed_from_u64(seed)` and positioned on the independent keystream
//! `set_stream(stream)`. Uniforms take the top 53 bits of `next_u64`.
//! Normals come in pairs from the Box–Muller transform
//! `√(−2 ln(1−u₁))·(cos 2πu₂, sin 2πu₂)`, which consumes exactly two
//! uniforms per pair and never rejects.
//!
//! Monte Carlo work is split over disjoint `(seed, stream)` pairs; no
//! generator state is ever shared between workers.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{domain, Result};

pub struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        NormalStream { rng, spare: None }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * (1.0 - self.uniform()).ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * self.uniform()).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn fill_standard(&mut self, out: &mut [f64]) {
        for z in out.iter_mut() {
            *z = self.next_standard();
        }
    }
}

/// One draw of `N_p(mean, I_p)` determined entirely by `(seed, stream)`.
pub fn rng_normal_vector(seed: u64, stream: u64, p: usize, mean: &[f64]) -> Result<Vec<f64>> {
    if p == 0 {
        return domain("rng_normal_vector needs p >= 1");
    }
    if mean.len() != p {
        return domain(format!("mean has length {} but p = {p}", mean.len()));
    }
    let mut g = NormalStream::new(seed, stream);
    Ok(mean.iter().map(|m| m + g.next_standard()).collect())
}
