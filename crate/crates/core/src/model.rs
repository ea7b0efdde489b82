//! Urn parameters, initial states and parameter families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest heavy rate accepted; below this `t_rel = 1/α` loses meaning.
pub const MIN_HEAVY_RATE: f64 = 1e-12;

/// One urn instance: `N` balls, `m` of them heavy with selection rate `α`.
///
/// Regular balls are selected at rate 1. Degenerate configurations
/// (`m ∈ {0, N}` or `α = 1`) are accepted and reported through
/// [`ModelParams::is_degenerate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    total_balls: usize,
    heavy_count: usize,
    heavy_rate: f64,
}

impl ModelParams {
    pub fn new(total_balls: usize, heavy_count: usize, heavy_rate: f64) -> Result<Self> {
        if total_balls == 0 {
            return Err(Error::domain("total_balls must be positive"));
        }
        if heavy_count > total_balls {
            return Err(Error::domain(format!(
                "heavy_count {heavy_count} exceeds total_balls {total_balls}"
            )));
        }
        if !(MIN_HEAVY_RATE..=1.0).contains(&heavy_rate) {
            return Err(Error::domain(format!(
                "heavy_rate {heavy_rate} outside [{MIN_HEAVY_RATE:e}, 1]"
            )));
        }
        Ok(Self {
            total_balls,
            heavy_count,
            heavy_rate,
        })
    }

    /// `N`.
    pub fn total_balls(&self) -> usize {
        self.total_balls
    }

    /// `m`.
    pub fn heavy_count(&self) -> usize {
        self.heavy_count
    }

    /// `n = N - m`.
    pub fn regular_count(&self) -> usize {
        self.total_balls - self.heavy_count
    }

    /// `α`.
    pub fn heavy_rate(&self) -> f64 {
        self.heavy_rate
    }

    /// `β = log m / log N`, so that `N^β = m`.
    ///
    /// `m = 0` gives `-∞`; `m = N` gives 1 (this also covers `N = 1`).
    pub fn beta(&self) -> f64 {
        if self.heavy_count == 0 {
            f64::NEG_INFINITY
        } else if self.heavy_count == self.total_balls {
            1.0
        } else {
            (self.heavy_count as f64).ln() / (self.total_balls as f64).ln()
        }
    }

    pub fn log_n(&self) -> f64 {
        (self.total_balls as f64).ln()
    }

    /// Relaxation time of the product chain, `1/α`.
    pub fn relaxation_time(&self) -> f64 {
        1.0 / self.heavy_rate
    }

    /// True when the instance lies outside `m ∈ {1..N-1}`, `α ∈ (0, 1)`.
    pub fn is_degenerate(&self) -> bool {
        self.heavy_count == 0 || self.heavy_count == self.total_balls || self.heavy_rate >= 1.0
    }

    /// Number of joint states `(n + 1)(m + 1)`.
    pub fn state_count(&self) -> u128 {
        (self.regular_count() as u128 + 1) * (self.heavy_count as u128 + 1)
    }

    /// `γ = (2β - 1)/α - 1`, the exponent governing the ball-count observable.
    pub fn gamma(&self) -> f64 {
        (2.0 * self.beta() - 1.0) / self.heavy_rate - 1.0
    }

    /// `γ̃ = β - α`, the exponent governing the full chain.
    pub fn tilde_gamma(&self) -> f64 {
        self.beta() - self.heavy_rate
    }

    pub fn predicted_times(&self) -> ReferenceTimes {
        ReferenceTimes::from_log_n(self.log_n(), self.beta(), self.heavy_rate)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} m={} alpha={}",
            self.total_balls, self.heavy_count, self.heavy_rate
        )
    }
}

/// Reference times `t^R`, `t^H` and `t^dc`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceTimes {
    /// `½ log N`: cutoff location of the unperturbed urn.
    pub regular: f64,
    /// `β/(2α) log N`: cutoff location of the heavy coordinate.
    pub heavy: f64,
    /// `(1 + γ)/2 log N`: delayed cutoff location of the observable.
    pub delayed: f64,
}

impl ReferenceTimes {
    /// Evaluates the three times for a real-valued `log N`.
    pub fn from_log_n(log_n: f64, beta: f64, alpha: f64) -> Self {
        let gamma = (2.0 * beta - 1.0) / alpha - 1.0;
        Self {
            regular: 0.5 * log_n,
            heavy: beta / (2.0 * alpha) * log_n,
            delayed: 0.5 * (1.0 + gamma) * log_n,
        }
    }
}

/// Initial configuration: `r` regular and `h` heavy balls in the left urn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InitialState {
    pub regular_left: usize,
    pub heavy_left: usize,
}

impl InitialState {
    pub fn new(params: &ModelParams, regular_left: usize, heavy_left: usize) -> Result<Self> {
        if regular_left > params.regular_count() || heavy_left > params.heavy_count() {
            return Err(Error::domain(format!(
                "initial state ({regular_left}, {heavy_left}) outside [0, {}] x [0, {}]",
                params.regular_count(),
                params.heavy_count()
            )));
        }
        Ok(Self {
            regular_left,
            heavy_left,
        })
    }

    /// Both urns' contents on the right: `(0, 0)`.
    pub fn empty_left() -> Self {
        Self {
            regular_left: 0,
            heavy_left: 0,
        }
    }

    /// Image under the left/right swap, `(n - r, m - h)`.
    pub fn mirrored(&self, params: &ModelParams) -> Self {
        Self {
            regular_left: params.regular_count() - self.regular_left,
            heavy_left: params.heavy_count() - self.heavy_left,
        }
    }

    /// The four extreme states of `{0..n} x {0..m}`, deduplicated.
    pub fn corners(params: &ModelParams) -> Vec<Self> {
        let (n, m) = (params.regular_count(), params.heavy_count());
        let mut out = Vec::with_capacity(4);
        for (r, h) in [(0, 0), (n, 0), (0, m), (n, m)] {
            let s = Self {
                regular_left: r,
                heavy_left: h,
            };
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    /// Every state of `{0..n} x {0..m}`.
    pub fn all(params: &ModelParams) -> Vec<Self> {
        let (n, m) = (params.regular_count(), params.heavy_count());
        (0..=n)
            .flat_map(|r| {
                (0..=m).map(move |h| Self {
                    regular_left: r,
                    heavy_left: h,
                })
            })
            .collect()
    }
}

/// How `m` scales with `N` within a family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum HeavyRule {
    Constant { m: usize },
    /// `m = round(N^exponent)`.
    Power { exponent: f64 },
    /// `m = round(scale · √N · e^{ell/2})`, so that `(2β - 1) log N → ell + 2 log scale`.
    SqrtScaled { scale: f64, ell: f64 },
}

impl HeavyRule {
    pub fn heavy_count(&self, total_balls: usize) -> usize {
        let n = total_balls as f64;
        match *self {
            HeavyRule::Constant { m } => m,
            HeavyRule::Power { exponent } => n.powf(exponent).round() as usize,
            HeavyRule::SqrtScaled { scale, ell } => (scale * n.sqrt() * (0.5 * ell).exp()).round() as usize,
        }
    }
}

/// Parses `const:M`, `pow:B` or `sqrt:C,ELL`.
impl FromStr for HeavyRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("bad heavy rule '{s}' (expected const:M, pow:B or sqrt:C,ELL)"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => Ok(HeavyRule::Constant {
                m: arg.trim().parse().map_err(|_| bad())?,
            }),
            "pow" => Ok(HeavyRule::Power {
                exponent: arg.trim().parse().map_err(|_| bad())?,
            }),
            "sqrt" => {
                let (c, l) = arg.split_once(',').ok_or_else(bad)?;
                Ok(HeavyRule::SqrtScaled {
                    scale: c.trim().parse().map_err(|_| bad())?,
                    ell: l.trim().parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// How `α` scales with `N` within a family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RateRule {
    Constant { alpha: f64 },
    /// `α = a / log N`.
    OverLogN { a: f64 },
}

impl RateRule {
    pub fn heavy_rate(&self, total_balls: usize) -> f64 {
        match *self {
            RateRule::Constant { alpha } => alpha,
            RateRule::OverLogN { a } => a / (total_balls as f64).ln(),
        }
    }
}

/// Parses `const:A` or `overlog:A`.
impl FromStr for RateRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("bad rate rule '{s}' (expected const:A or overlog:A)"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let value: f64 = arg.trim().parse().map_err(|_| bad())?;
        match kind {
            "const" => Ok(RateRule::Constant { alpha: value }),
            "overlog" => Ok(RateRule::OverLogN { a: value }),
            _ => Err(bad()),
        }
    }
}

/// A finite sample of a parameter sequence `N ↦ (m_N, α_N)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamFamily {
    heavy: HeavyRule,
    rate: RateRule,
    sizes: Vec<usize>,
}

impl ParamFamily {
    /// Sample sizes must be strictly increasing, at least two of them, and
    /// every sampled instance must be a valid [`ModelParams`].
    pub fn new(heavy: HeavyRule, rate: RateRule, sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::domain("a family needs at least two sample sizes"));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("sample sizes must be strictly increasing"));
        }
        let family = Self { heavy, rate, sizes };
        family.instances()?;
        Ok(family)
    }

    pub fn heavy_rule(&self) -> HeavyRule {
        self.heavy
    }

    pub fn rate_rule(&self) -> RateRule {
        self.rate
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn instance(&self, total_balls: usize) -> Result<ModelParams> {
        ModelParams::new(
            total_balls,
            self.heavy.heavy_count(total_balls),
            self.rate.heavy_rate(total_balls),
        )
    }

    pub fn instances(&self) -> Result<Vec<ModelParams>> {
        self.sizes.iter().map(|&n| self.instance(n)).collect()
    }
}
