//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Segment};
use crate::reduction::bounded_ratio_transform;

/// Identifier recorded in every generated file and report.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9)";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Weights are log-uniform on `[w_lo, w_hi]`.
    pub w_lo: f64,
    pub w_hi: f64,
    /// Prices are uniform on `[0, price_scale * total_weight]`, sorted descending.
    pub price_scale: f64,
}

impl RandomSpec {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        RandomSpec {
            n,
            k,
            seed,
            w_lo: 0.05,
            w_hi: 2.0,
            price_scale: 1.0,
        }
    }

    pub fn weights(mut self, lo: f64, hi: f64) -> Self {
        self.w_lo = lo;
        self.w_hi = hi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadSpec(m.into()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if !(self.w_lo > 0.0 && self.w_lo <= self.w_hi && self.w_hi.is_finite()) {
            return bad("weight range must satisfy 0 < w_lo <= w_hi < inf");
        }
        if !(self.price_scale >= 0.0 && self.price_scale.is_finite()) {
            return bad("price_scale must be finite and >= 0");
        }
        Ok(())
    }
}

pub fn random_instance(spec: &RandomSpec) -> Result<Instance<f64>> {
    spec.validate()?;
    sample(spec, &mut rng(spec.seed))
}

/// Draws from an existing generator, for callers producing many instances.
pub fn sample<R: Rng>(spec: &RandomSpec, rng: &mut R) -> Result<Instance<f64>> {
    spec.validate()?;
    let (lo, hi) = (spec.w_lo.ln(), spec.w_hi.ln());
    let weights: Vec<f64> = (0..spec.n)
        .map(|_| {
            if lo == hi {
                spec.w_lo
            } else {
                rng.random_range(lo..=hi).exp()
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let top = spec.price_scale * total;
    let raw: Vec<f64> = (0..spec.k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = raw.iter().sum();
    let segments = raw
        .iter()
        .map(|x| {
            let mut prices: Vec<f64> = (0..spec.n)
                .map(|_| {
                    if top > 0.0 {
                        rng.random_range(0.0..=top)
                    } else {
                        0.0
                    }
                })
                .collect();
            prices.sort_by(|a, b| b.total_cmp(a));
            Segment::new(x / sum, prices)
        })
        .collect();
    Instance::new(weights, segments)
}

/// A random instance with `w_hi` capped at `1/eps`, after rounding, so it
/// satisfies the bounded-ratio conditions for `eps`.
pub fn sample_bounded<R: Rng>(spec: &RandomSpec, eps: f64, rng: &mut R) -> Result<Instance<f64>> {
    let mut capped = spec.clone();
    capped.w_hi = capped.w_hi.min(1.0 / eps);
    capped.w_lo = capped.w_lo.min(capped.w_hi);
    Ok(bounded_ratio_transform(&sample(&capped, rng)?, eps)?.modified)
}
