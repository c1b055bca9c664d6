//! Seeded uniform streams.
//!
//! Every random draw in the crate goes through inverse-CDF sampling, so a
//! sampler consumes exactly one uniform variate per draw. Student `i` of an
//! experiment seeded with `seed` always reads from `Stream::substream(seed, i)`,
//! which makes results independent of thread count and scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source of uniform variates in `[0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// A ChaCha8 stream identified by `(seed, index)`.
#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Stream(rng)
    }
}

impl UniformSource for Stream {
    fn next_uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }
}

/// Replays a fixed list of variates, then panics. Handy for pinning a sampler
/// to a known stream position.
#[derive(Debug, Clone)]
pub struct FixedUniforms {
    values: Vec<f64>,
    pos: usize,
}

impl FixedUniforms {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        FixedUniforms {
            values: values.into(),
            pos: 0,
        }
    }
}

impl UniformSource for FixedUniforms {
    fn next_uniform(&mut self) -> f64 {
        let u = self.values[self.pos];
        self.pos += 1;
        u
    }
}
