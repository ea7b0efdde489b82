//! Analytic upper and lower bounds on the distances `D(t)` and `D̃(t)`.
//!
//! Every bound is evaluated with the integer `m` directly (`N^β = m`), never
//! with a real-valued power of `N`.
//!
//! Certified bounds (valid at every finite `N`):
//!
//! | function | bounds | from |
//! |---|---|---|
//! | [`coupling_union_bound`] | `D` from above | `P(some ball unselected)` |
//! | [`l2_upper_bound`] | `D` from above | chi-square of the exchangeable coupling |
//! | [`product_chain_upper_bound`] | `D̃` from above | product-chain chi-square |
//! | [`chebyshev_lower_bound`] | `D` from below | half-line event, Chebyshev on both laws |
//! | [`kolmogorov_lower_bound`] | `D` from below | best half-line event, exact CDFs |
//!
//! [`clt_lower_bound`] replaces Chebyshev by the normal approximation and is
//! only asymptotically valid.

use serde::Serialize;
use libm::erfc;

use crate::dist::{self, mean_and_variance_s, stationary_observed};
use crate::model::{InitialState, ModelParams};
use crate::negdep::mean_z;
use crate::{Error, Result};

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `m e^{-αt} + (N - m) e^{-t}`: expected number of balls never selected.
///
/// Not clamped; values above 1 show how loose the union bound is.
pub fn coupling_union_bound(params: &ModelParams, t: f64) -> f64 {
    let s = dist::SurvivalPair::at(params, t);
    params.heavy_count() as f64 * s.heavy_survival + params.regular_count() as f64 * s.regular_survival
}

/// `min(1, ½ √((1 + z²)^N - 1))` with `z = E[Z_i(t)]`.
///
/// The chi-square distance of the exchangeable coupling is at most
/// `∏ (1 + E[Z_i]²) - 1` and TV is at most half the L² distance.
pub fn l2_upper_bound(params: &ModelParams, t: f64) -> f64 {
    let z = mean_z(params, t);
    let n = params.total_balls() as f64;
    let chi2 = (n * (z * z).ln_1p()).exp_m1();
    (0.5 * chi2.sqrt()).min(1.0)
}

/// `min(1, √(2 m e^{-2αt} + 2 N e^{-2t}))`, a bound on `D̃(t)`.
pub fn product_chain_upper_bound(params: &ModelParams, t: f64) -> f64 {
    let m = params.heavy_count() as f64;
    let n = params.total_balls() as f64;
    let sq = 2.0 * m * (-2.0 * params.heavy_rate() * t).exp() + 2.0 * n * (-2.0 * t).exp();
    sq.sqrt().min(1.0)
}

/// Standardized drift `c = (N/2 - E[S(t)]) / √N` of the count from `(0, 0)`.
pub fn drift_ratio(params: &ModelParams, t: f64) -> f64 {
    let n = params.total_balls() as f64;
    (0.5 * n - mean_and_variance_s(params, t).mean) / n.sqrt()
}

/// `1 - 2/c²` when `c > √2`, else 0.
///
/// With `k = ⌈c√N/2⌉`, Chebyshev bounds both `P(S⋆ ≤ N/2 - k)` and
/// `P(S(t) > N/2 - k)` by `1/c²`, and the gap between the two
/// probabilities of that event is a lower bound on `D(t)`.
pub fn chebyshev_lower_bound(params: &ModelParams, t: f64) -> f64 {
    let c = drift_ratio(params, t);
    if c <= std::f64::consts::SQRT_2 {
        0.0
    } else {
        1.0 - 2.0 / (c * c)
    }
}

/// Largest gap `|P(W_t ≤ j) - P(W⋆ ≤ j)|` over thresholds `j`, from `(0, 0)`.
pub fn kolmogorov_lower_bound(params: &ModelParams, t: f64) -> f64 {
    let law = dist::observed_law(params, InitialState::empty_left(), t);
    let stationary = stationary_observed(params);
    law.cdf()
        .iter()
        .zip(stationary.cdf())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// `max(0, Φ(c) - Φ(-c))`; only valid as `N → ∞`.
pub fn clt_lower_bound(params: &ModelParams, t: f64) -> f64 {
    clt_lower_bound_with_slack(params, t, 0.0)
}

pub fn clt_lower_bound_with_slack(params: &ModelParams, t: f64, slack: f64) -> f64 {
    let c = drift_ratio(params, t);
    (normal_cdf(c) - normal_cdf(-c) - slack).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    CouplingUb,
    L2Ub,
    ChainL2Ub,
    ChebyshevLb,
    CltLb,
    KolmogorovLb,
    /// The exact observable distance over the corner initial states.
    Exact,
}

impl BoundKind {
    /// Non-certified bounds hold only in the large-`N` limit.
    pub fn asymptotic(&self) -> bool {
        matches!(self, BoundKind::CltLb)
    }

    pub fn evaluate(&self, params: &ModelParams, t: f64) -> Result<f64> {
        Ok(match self {
            BoundKind::CouplingUb => coupling_union_bound(params, t),
            BoundKind::L2Ub => l2_upper_bound(params, t),
            BoundKind::ChainL2Ub => product_chain_upper_bound(params, t),
            BoundKind::ChebyshevLb => chebyshev_lower_bound(params, t),
            BoundKind::CltLb => clt_lower_bound(params, t),
            BoundKind::KolmogorovLb => kolmogorov_lower_bound(params, t),
            BoundKind::Exact => dist::observed_tv(params, t, dist::ScanStrategy::Corners)?,
        })
    }
}

/// One sampled point of a [`BoundCurve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub value: f64,
    /// The value before clamping to `[0, 1]`; differs only for the union bound.
    pub raw: f64,
}

/// A bound (or the exact distance) sampled on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub asymptotic: bool,
    pub params: ModelParams,
    pub points: Vec<CurvePoint>,
}

impl BoundCurve {
    pub fn sample(kind: BoundKind, params: &ModelParams, times: &[f64]) -> Result<Self> {
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("grid times must be strictly increasing"));
        }
        if times.iter().any(|&t| !(t >= 0.0)) {
            return Err(Error::domain("grid times must be non-negative"));
        }
        let points = times
            .iter()
            .map(|&t| {
                let raw = kind.evaluate(params, t)?;
                Ok(CurvePoint {
                    t,
                    value: raw.clamp(0.0, 1.0),
                    raw,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind,
            asymptotic: kind.asymptotic(),
            params: *params,
            points,
        })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{chain_tv, observed_tv, ScanStrategy};

    fn params(n: usize, m: usize, a: f64) -> ModelParams {
        ModelParams::new(n, m, a).unwrap()
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for &x in &[0.1, 0.7, 1.3, 2.9, 6.0] {
            assert!((normal_cdf(-x) - (1.0 - normal_cdf(x))).abs() < 1e-15);
        }
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-12);
        assert!((normal_cdf(1.96) - normal_cdf(-1.96) - 0.95).abs() < 1e-3);
    }

    #[test]
    fn coupling_examples() {
        let p = params(4, 2, 0.5);
        assert_eq!(coupling_union_bound(&p, 0.0), 4.0);
        assert!((coupling_union_bound(&p, 2.0) - 1.006_430_2).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let v = coupling_union_bound(&p, 0.2 * i as f64);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn l2_examples() {
        let p = params(4, 2, 0.5);
        assert!(l2_upper_bound(&p, 200.0) < 1e-40);
        assert!((l2_upper_bound(&p, 2.0) - 0.263_771_712_424_130_8).abs() < 1e-6);
        for m in [0, 1, 3, 7] {
            let p = params(7, m, 1.0);
            for t in [0.5f64, 1.0, 3.0] {
                let closed = (0.5 * ((1.0 + (-2.0 * t).exp()).powi(7) - 1.0).sqrt()).min(1.0);
                assert!((l2_upper_bound(&p, t) - closed).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn l2_insensitivity_chain() {
        let n = 10_000usize;
        let p = params(n, 1, 1.0);
        for &c in &[1.0, 2.0, 4.0] {
            let t = 0.5 * (n as f64).ln() + c;
            let closed = 0.5 * ((1.0 + (-2.0 * c).exp() / n as f64).powi(n as i32) - 1.0).sqrt();
            let v = l2_upper_bound(&p, t);
            assert!((v - closed).abs() < 1e-9, "{v} vs {closed}");
            assert!(v <= ((-2.0 * c).exp().exp() - 1.0).sqrt());
        }
    }

    #[test]
    fn product_chain_examples() {
        let p = params(10_000, 1000, 0.2);
        assert_eq!(product_chain_upper_bound(&p, 0.0), 1.0);
        let t = p.predicted_times().heavy + 4.0 / 0.2;
        let v = product_chain_upper_bound(&p, t);
        assert!((v - 0.0259).abs() < 1e-3, "{v}");
        let p = params(30, 6, 0.4);
        for i in 0..30 {
            let t = 0.5 * i as f64;
            assert!(chain_tv(&p, t, ScanStrategy::FullScan).unwrap() <= product_chain_upper_bound(&p, t) + 1e-12);
        }
    }

    #[test]
    fn chebyshev_examples() {
        assert!((chebyshev_lower_bound(&params(100, 10, 0.5), 0.0) - 0.92).abs() < 1e-12);
        assert_eq!(chebyshev_lower_bound(&params(100, 10, 0.5), 1e3), 0.0);
        for (n, m, a) in [(30, 5, 0.3), (60, 20, 0.8), (64, 1, 1.0)] {
            let p = params(n, m, a);
            for i in 0..40 {
                let t = 0.15 * i as f64;
                let exact = observed_tv(&p, t, ScanStrategy::FullScan).unwrap();
                assert!(chebyshev_lower_bound(&p, t) <= exact + 1e-12);
            }
        }
    }

    #[test]
    fn kolmogorov_examples() {
        let p = params(4, 2, 0.5);
        let v = kolmogorov_lower_bound(&p, 0.0);
        assert!((v - 15.0 / 16.0).abs() < 1e-15);
        assert!(v >= 0.93);
        assert!(kolmogorov_lower_bound(&p, 1e6) < 1e-12);
        let p = params(40, 9, 0.35);
        for i in 0..40 {
            let t = 0.1 * i as f64;
            let k = kolmogorov_lower_bound(&p, t);
            assert!(k <= observed_tv(&p, t, ScanStrategy::Corners).unwrap() + 1e-12);
            assert!(chebyshev_lower_bound(&p, t) <= k + 1e-12);
        }
    }

    #[test]
    fn clt_examples() {
        assert_eq!(clt_lower_bound(&params(100, 10, 0.5), 1e4), 0.0);
        // No-cutoff instance at t = 2 t_rel.
        let n = 10_000usize;
        let alpha = 1.0 / (n as f64).ln();
        let p = params(n, 272, alpha);
        let t = 2.0 / alpha;
        let exact = observed_tv(&p, t, ScanStrategy::Corners).unwrap();
        assert!((clt_lower_bound(&p, t) - exact).abs() < 0.05);
        assert!(clt_lower_bound_with_slack(&p, t, 1.0) == 0.0);
    }

    #[test]
    fn bounds_non_increasing() {
        let p = params(200, 20, 0.3);
        for kind in [
            BoundKind::CouplingUb,
            BoundKind::L2Ub,
            BoundKind::ChainL2Ub,
            BoundKind::ChebyshevLb,
            BoundKind::CltLb,
            BoundKind::KolmogorovLb,
        ] {
            let times: Vec<f64> = (0..80).map(|i| 0.2 * i as f64).collect();
            let c = BoundCurve::sample(kind, &p, &times).unwrap();
            let v: Vec<f64> = c.values().collect();
            assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{kind:?}");
        }
    }

    #[test]
    fn curve_reports_raw_union_bound() {
        let p = params(50, 5, 0.5);
        let c = BoundCurve::sample(BoundKind::CouplingUb, &p, &[0.0, 1.0]).unwrap();
        assert_eq!(c.points[0].raw, 50.0);
        assert_eq!(c.points[0].value, 1.0);
        assert!(BoundCurve::sample(BoundKind::L2Ub, &p, &[1.0, 1.0]).is_err());
        assert!(BoundCurve::sample(BoundKind::L2Ub, &p, &[-1.0]).is_err());
        assert!(BoundCurve::sample(BoundKind::CltLb, &p, &[1.0]).unwrap().asymptotic);
    }
}
