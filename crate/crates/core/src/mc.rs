//! Sharded Monte Carlo estimation.
//!
//! Samples are split into fixed-size shards, each with a seed derived from
//! `(seed, shard index)`. Shard sums are reduced in index order, so the
//! estimate is identical whether shards run serially or in parallel.

use serde::Serialize;

use crate::seeds::{self, tags, Rng};

const SHARD: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            std_err: (var / nf).sqrt(),
            samples: n,
        }
    }

    /// Whether `value` lies within `k` standard errors. A zero standard error
    /// (degenerate distribution) falls back to an absolute 1e-12 band.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= (k * self.std_err).max(1e-12)
    }
}

fn shard_sums<F>(samples: u64, seed: u64, draw: &F) -> Vec<(f64, f64)>
where
    F: Fn(&mut Rng) -> f64 + Sync,
{
    let shards = samples.div_ceil(SHARD);
    let run = |s: u64| {
        let mut rng = seeds::rng_for(seed, &[tags::SHARD, s]);
        let len = SHARD.min(samples - s * SHARD);
        let mut acc = (0.0, 0.0);
        for _ in 0..len {
            let x = draw(&mut rng);
            acc.0 += x;
            acc.1 += x * x;
        }
        acc
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..shards).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..shards).map(run).collect()
    }
}

/// Mean of `draw` over `samples` independent draws.
pub fn estimate_mean<F>(samples: u64, seed: u64, draw: F) -> Estimate
where
    F: Fn(&mut Rng) -> f64 + Sync,
{
    assert!(samples > 0, "at least one sample");
    let (sum, sum_sq) = shard_sums(samples, seed, &draw)
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Estimate::from_sums(sum, sum_sq, samples)
}

/// Probability that `event` occurs.
pub fn estimate_probability<F>(samples: u64, seed: u64, event: F) -> Estimate
where
    F: Fn(&mut Rng) -> bool + Sync,
{
    estimate_mean(samples, seed, |r| if event(r) { 1.0 } else { 0.0 })
}
