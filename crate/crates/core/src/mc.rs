//! Reproducible Monte Carlo samplers for `(R_t, H_t)`.
//!
//! Each draw owns its random stream: a ChaCha8 generator keyed by the master
//! seed and positioned on stream `draw index`. Draws are therefore
//! independent of how work is split across threads, and a batch is a pure
//! function of `(params, init, t, seed, count)`.
//!
//! Two samplers produce exact draws from the same law:
//!
//! - [`sample_coupled`] resolves each ball directly: it survives with
//!   probability `e^{-rate·t}` and otherwise lands in a fair-coin urn.
//! - [`sample_ctmc`] runs the continuous-time chain event by event and
//!   serves as an independent physical-model oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{self, Pmf, SurvivalPair};
use crate::model::{InitialState, ModelParams};
use crate::{Error, Result};

/// Deterministic stream for draw `index` under `seed`.
pub fn draw_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn count_left<R: Rng>(rng: &mut R, started_left: usize, total: usize, survival: f64) -> usize {
    let mut left = 0;
    for i in 0..total {
        let survived = rng.random::<f64>() < survival;
        let is_left = if survived { i < started_left } else { rng.random::<bool>() };
        left += is_left as usize;
    }
    left
}

/// One exact draw of `(R_t, H_t)` via per-ball survival indicators.
pub fn sample_coupled<R: Rng>(params: &ModelParams, init: InitialState, t: f64, rng: &mut R) -> (usize, usize) {
    let s = SurvivalPair::at(params, t);
    let r = count_left(rng, init.regular_left, params.regular_count(), s.regular_survival);
    let h = count_left(rng, init.heavy_left, params.heavy_count(), s.heavy_survival);
    (r, h)
}

/// Final state of an event-driven run together with its number of selections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CtmcDraw {
    pub regular_left: usize,
    pub heavy_left: usize,
    pub events: u64,
}

/// Simulates the chain on `[0, t]`: selections arrive at total rate
/// `n + mα`; the selected ball is uniform within its class and moves to a
/// fair-coin urn.
pub fn sample_ctmc_with_events<R: Rng>(params: &ModelParams, init: InitialState, t: f64, rng: &mut R) -> CtmcDraw {
    let n = params.regular_count();
    let m = params.heavy_count();
    let regular_rate = n as f64;
    let total_rate = regular_rate + m as f64 * params.heavy_rate();
    let (mut r, mut h) = (init.regular_left, init.heavy_left);
    let mut clock = 0.0;
    let mut events = 0;
    loop {
        let u: f64 = rng.random();
        clock += -(1.0 - u).ln() / total_rate;
        if clock > t {
            break;
        }
        events += 1;
        let regular = rng.random::<f64>() * total_rate < regular_rate;
        let to_left = rng.random::<bool>();
        if regular {
            let from_left = rng.random_range(0..n) < r;
            r = r + to_left as usize - from_left as usize;
        } else {
            let from_left = rng.random_range(0..m) < h;
            h = h + to_left as usize - from_left as usize;
        }
    }
    CtmcDraw {
        regular_left: r,
        heavy_left: h,
        events,
    }
}

pub fn sample_ctmc<R: Rng>(params: &ModelParams, init: InitialState, t: f64, rng: &mut R) -> (usize, usize) {
    let d = sample_ctmc_with_events(params, init, t, rng);
    (d.regular_left, d.heavy_left)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    Coupled,
    Ctmc,
}

/// `count` reproducible draws of `(R_t, H_t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleBatch {
    pub params: ModelParams,
    pub init: InitialState,
    pub t: f64,
    pub seed: u64,
    pub sampler: Sampler,
    pub outcomes: Vec<(usize, usize)>,
}

impl SampleBatch {
    pub fn generate(
        params: &ModelParams,
        init: InitialState,
        t: f64,
        seed: u64,
        count: usize,
        sampler: Sampler,
    ) -> Result<Self> {
        let init = InitialState::new(params, init.regular_left, init.heavy_left)?;
        if !(t >= 0.0) {
            return Err(Error::domain(format!("time {t} must be non-negative")));
        }
        if count == 0 {
            return Err(Error::domain("sample count must be positive"));
        }
        let outcomes = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = draw_stream(seed, i);
                match sampler {
                    Sampler::Coupled => sample_coupled(params, init, t, &mut rng),
                    Sampler::Ctmc => sample_ctmc(params, init, t, &mut rng),
                }
            })
            .collect();
        Ok(Self {
            params: *params,
            init,
            t,
            seed,
            sampler,
            outcomes,
        })
    }

    pub fn count(&self) -> usize {
        self.outcomes.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    /// `R + H`.
    W,
    R,
    H,
}

/// Normalized histogram of the projected outcomes over their full support.
pub fn empirical_pmf(batch: &SampleBatch, projection: Projection) -> Result<Pmf> {
    let support = match projection {
        Projection::W => batch.params.total_balls(),
        Projection::R => batch.params.regular_count(),
        Projection::H => batch.params.heavy_count(),
    } + 1;
    let mut counts = vec![0u64; support];
    for &(r, h) in &batch.outcomes {
        let k = match projection {
            Projection::W => r + h,
            Projection::R => r,
            Projection::H => h,
        };
        counts[k] += 1;
    }
    Pmf::from_counts(&counts)
}

/// Total variation between the empirical joint laws of two batches.
pub fn two_sample_tv(a: &SampleBatch, b: &SampleBatch) -> f64 {
    let width = a.params.heavy_count() + 1;
    let cells = (a.params.regular_count() + 1) * width;
    let hist = |batch: &SampleBatch| {
        let mut h = vec![0.0; cells];
        let w = 1.0 / batch.count() as f64;
        for &(r, hv) in &batch.outcomes {
            h[r * width + hv] += w;
        }
        h
    };
    let (ha, hb) = (hist(a), hist(b));
    0.5 * ha.iter().zip(&hb).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Plug-in estimate of `‖ν_t^{r,h} - ν⋆‖_tv` from coupled draws.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TvEstimate {
    pub estimate: f64,
    /// The plug-in estimate is biased upwards by up to about `√((N + 1)/count)`.
    pub bias_bound: f64,
    pub count: usize,
}

pub fn estimate_observed_tv(
    params: &ModelParams,
    init: InitialState,
    t: f64,
    count: usize,
    seed: u64,
) -> Result<TvEstimate> {
    let batch = SampleBatch::generate(params, init, t, seed, count, Sampler::Coupled)?;
    let empirical = empirical_pmf(&batch, Projection::W)?;
    Ok(TvEstimate {
        estimate: dist::tv(&empirical, &dist::stationary_observed(params)),
        bias_bound: ((params.total_balls() + 1) as f64 / count as f64).sqrt(),
        count,
    })
}

/// Empirical mean and variance of `W` over a batch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BatchMoments {
    pub mean: f64,
    pub variance: f64,
    /// `√(variance / count)`.
    pub standard_error: f64,
}

pub fn batch_moments(batch: &SampleBatch) -> BatchMoments {
    let n = batch.count() as f64;
    let mean = batch.outcomes.iter().map(|&(r, h)| (r + h) as f64).sum::<f64>() / n;
    let variance = batch
        .outcomes
        .iter()
        .map(|&(r, h)| ((r + h) as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    BatchMoments {
        mean,
        variance,
        standard_error: (variance / n).sqrt(),
    }
}
