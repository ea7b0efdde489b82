//! Regime classification and numerical mixing times.
//!
//! The ball-count observable has three regimes, decided by the limit of
//! `γ = (2β - 1)/α - 1` and, when `γ ≥ 0`, by whether
//! `ℓ = (2β - 1) log N` diverges:
//!
//! | regime | condition | cutoff at |
//! |---|---|---|
//! | insensitivity | `γ∞ < 0` | `t^R = ½ log N` |
//! | delayed cutoff | `γ∞ ≥ 0`, `ℓ → ∞` | `t^dc = (1 + γ)/2 · log N` |
//! | no cutoff | `γ∞ ≥ 0`, `ℓ` finite | none; mixes on scale `1/α` |
//!
//! The full chain follows the same pattern with `γ̃ = β - α` and the
//! divergence of `m` in place of `ℓ`, with cutoff at `t^R` or
//! `t^H = β/(2α) · log N`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{self, ScanStrategy};
use crate::model::{ModelParams, ParamFamily, ReferenceTimes};
use crate::{Error, Result};

/// Successive finite-N values must agree within this relative tolerance.
pub const AGREEMENT_TOLERANCE: f64 = 0.05;
/// `ℓ` (or `m`) is declared divergent when it grows by more than this factor.
pub const DIVERGENCE_GROWTH: f64 = 1.2;
/// Relative bracket width of [`mixing_time`], in units of `t_rel`.
pub const BRACKET_RESOLUTION: f64 = 1e-3;
/// Mixing-time search horizon, in units of `max(t^R, t^H, t_rel)`.
pub const HORIZON_FACTOR: f64 = 100.0;
/// Joint-state budget above which [`classify`] skips the chain mixing time.
pub const RATIO_STATE_LIMIT: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Insensitivity,
    DelayedCutoff,
    NoCutoff,
    Undetermined,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "insensitivity" => Ok(Regime::Insensitivity),
            "delayedcutoff" => Ok(Regime::DelayedCutoff),
            "nocutoff" => Ok(Regime::NoCutoff),
            "undetermined" => Ok(Regime::Undetermined),
            _ => Err(Error::domain(format!("unknown regime '{s}'"))),
        }
    }
}

/// Limit behaviour of a sequence sampled at its two largest sizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "state", content = "value", rename_all = "snake_case")]
pub enum Limit {
    Finite(f64),
    Infinite,
    Undetermined,
}

impl Limit {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

fn agree(prev: f64, last: f64) -> bool {
    (last - prev).abs() <= AGREEMENT_TOLERANCE * prev.abs().max(last.abs()) || (last - prev).abs() <= 1e-12
}

fn converged(prev: f64, last: f64) -> Limit {
    if agree(prev, last) {
        Limit::Finite(last)
    } else {
        Limit::Undetermined
    }
}

fn converged_or_divergent(prev: f64, last: f64) -> Limit {
    if agree(prev, last) {
        Limit::Finite(last)
    } else if prev > 0.0 && last > DIVERGENCE_GROWTH * prev {
        Limit::Infinite
    } else {
        Limit::Undetermined
    }
}

/// Asymptotic inputs asserted by the caller instead of being extrapolated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeclaredLimits {
    pub gamma_inf: f64,
    pub tilde_gamma_inf: f64,
    /// `None` stands for `ℓ = +∞`.
    pub ell: Option<f64>,
    pub m_diverges: bool,
    pub expected_observable: Option<Regime>,
    pub expected_chain: Option<Regime>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifyMode {
    Extrapolate,
    Declared(DeclaredLimits),
}

/// Finite-N exponents of one sampled instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeSample {
    pub total_balls: usize,
    pub heavy_count: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tilde_gamma: f64,
    /// `(2β - 1) log N`.
    pub ell: f64,
    pub is_degenerate: bool,
}

impl RegimeSample {
    fn of(p: &ModelParams) -> Self {
        Self {
            total_balls: p.total_balls(),
            heavy_count: p.heavy_count(),
            alpha: p.heavy_rate(),
            beta: p.beta(),
            gamma: p.gamma(),
            tilde_gamma: p.tilde_gamma(),
            ell: (2.0 * p.beta() - 1.0) * p.log_n(),
            is_degenerate: p.is_degenerate(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub schema: &'static str,
    pub mode: &'static str,
    pub samples: Vec<RegimeSample>,
    pub gamma_inf: Limit,
    pub tilde_gamma_inf: Limit,
    pub ell: Limit,
    pub m_divergence: Limit,
    pub observable_regime: Regime,
    pub chain_regime: Regime,
    pub predicted_times: ReferenceTimes,
    /// `t^H / t^R` at the largest size.
    pub heavy_to_regular_time_ratio: f64,
    /// `α log N` at the largest size.
    pub alpha_log_n: f64,
    /// Chain `t_mix(¼) / t_rel` at the largest size, when affordable.
    pub product_condition_ratio: Option<f64>,
}

pub const REGIME_REPORT_SCHEMA: &str = "regime-report/1";

fn observable_label(gamma: Limit, ell: Limit) -> Regime {
    match gamma {
        Limit::Finite(g) if g < 0.0 => Regime::Insensitivity,
        Limit::Finite(_) | Limit::Infinite => match ell {
            Limit::Infinite => Regime::DelayedCutoff,
            Limit::Finite(_) => Regime::NoCutoff,
            Limit::Undetermined => Regime::Undetermined,
        },
        Limit::Undetermined => Regime::Undetermined,
    }
}

fn chain_label(tilde_gamma: Limit, m_diverges: Limit) -> Regime {
    match tilde_gamma {
        Limit::Finite(g) if g < 0.0 => Regime::Insensitivity,
        Limit::Finite(_) | Limit::Infinite => match m_diverges {
            Limit::Infinite => Regime::DelayedCutoff,
            Limit::Finite(_) => Regime::NoCutoff,
            Limit::Undetermined => Regime::Undetermined,
        },
        Limit::Undetermined => Regime::Undetermined,
    }
}

/// Checks the implications between declared limits, listing every violation.
fn validate_declared(d: &DeclaredLimits) -> Result<()> {
    let mut violations = Vec::new();
    if d.tilde_gamma_inf < 0.0 && d.gamma_inf >= 0.0 {
        violations.push("tilde_gamma_inf < 0 implies gamma_inf < 0".to_string());
    }
    if d.gamma_inf >= 0.0 && !d.m_diverges {
        violations.push("gamma_inf >= 0 implies m -> infinity".to_string());
    }
    if let Some(ell) = d.ell {
        if ell < 0.0 && d.gamma_inf >= 0.0 {
            violations.push("gamma_inf >= 0 implies (2 beta - 1) log N >= 0".to_string());
        }
    }
    if !(-1.0..=1.0).contains(&d.tilde_gamma_inf) {
        violations.push("tilde_gamma_inf must lie in [-1, 1]".to_string());
    }
    let ell = d.ell.map_or(Limit::Infinite, Limit::Finite);
    let obs = observable_label(Limit::Finite(d.gamma_inf), ell);
    if let Some(expected) = d.expected_observable {
        if expected != obs {
            violations.push(format!(
                "expected observable regime {expected:?} but the declared limits imply {obs:?}"
            ));
        }
    }
    let m = if d.m_diverges { Limit::Infinite } else { Limit::Finite(0.0) };
    let chain = chain_label(Limit::Finite(d.tilde_gamma_inf), m);
    if let Some(expected) = d.expected_chain {
        if expected != chain {
            violations.push(format!(
                "expected chain regime {expected:?} but the declared limits imply {chain:?}"
            ));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Contradiction(violations.join("; ")))
    }
}

pub fn classify(family: &ParamFamily, mode: ClassifyMode) -> Result<RegimeReport> {
    let instances = family.instances()?;
    let samples: Vec<RegimeSample> = instances.iter().map(RegimeSample::of).collect();
    let (prev, last) = match samples.as_slice() {
        [.., a, b] => (*a, *b),
        _ => return Err(Error::domain("a family needs at least two sample sizes")),
    };

    let (mode_name, gamma_inf, tilde_gamma_inf, ell, m_divergence) = match mode {
        ClassifyMode::Extrapolate => {
            let m_div = if last.heavy_count <= prev.heavy_count {
                Limit::Finite(last.heavy_count as f64)
            } else if last.heavy_count as f64 > DIVERGENCE_GROWTH * prev.heavy_count as f64 {
                Limit::Infinite
            } else {
                Limit::Undetermined
            };
            (
                "extrapolate",
                converged(prev.gamma, last.gamma),
                converged(prev.tilde_gamma, last.tilde_gamma),
                converged_or_divergent(prev.ell, last.ell),
                m_div,
            )
        }
        ClassifyMode::Declared(d) => {
            validate_declared(&d)?;
            (
                "declared",
                Limit::Finite(d.gamma_inf),
                Limit::Finite(d.tilde_gamma_inf),
                d.ell.map_or(Limit::Infinite, Limit::Finite),
                if d.m_diverges { Limit::Infinite } else { Limit::Finite(last.heavy_count as f64) },
            )
        }
    };

    let largest = *instances.last().expect("at least two instances");
    let times = largest.predicted_times();
    let product_condition_ratio = if largest.state_count() <= RATIO_STATE_LIMIT {
        product_condition_ratio(&largest, 0.25).ok()
    } else {
        None
    };

    Ok(RegimeReport {
        schema: REGIME_REPORT_SCHEMA,
        mode: mode_name,
        samples,
        gamma_inf,
        tilde_gamma_inf,
        ell,
        m_divergence,
        observable_regime: observable_label(gamma_inf, ell),
        chain_regime: chain_label(tilde_gamma_inf, m_divergence),
        predicted_times: times,
        heavy_to_regular_time_ratio: times.heavy / times.regular,
        alpha_log_n: largest.heavy_rate() * largest.log_n(),
        product_condition_ratio,
    })
}

/// Which distance a mixing time refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `D(t)`, the ball-count observable.
    Observable,
    /// `D̃(t)`, the full chain.
    Chain,
}

impl Target {
    /// Exact worst-case distance over the corner initial states.
    pub fn distance(&self, params: &ModelParams, t: f64) -> f64 {
        let d = match self {
            Target::Observable => dist::observed_tv(params, t, ScanStrategy::Corners),
            Target::Chain => dist::chain_tv(params, t, ScanStrategy::Corners),
        };
        d.expect("corner scan has no capacity guard")
    }

    fn hint(&self, params: &ModelParams) -> f64 {
        let times = params.predicted_times();
        let h = match self {
            Target::Observable if params.gamma() >= 0.0 => times.delayed,
            Target::Observable => times.regular,
            Target::Chain => times.regular.max(times.heavy),
        };
        if h > 0.0 {
            h
        } else {
            params.relaxation_time()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixingTimeResult {
    pub epsilon: f64,
    pub target: Target,
    /// Midpoint of the bracket.
    pub t_mix: f64,
    /// Last evaluated time with distance above `epsilon`.
    pub lower: f64,
    /// First evaluated time with distance at most `epsilon`.
    pub upper: f64,
    pub distance_at_lower: f64,
    pub distance_at_upper: f64,
    pub evaluations: usize,
}

impl MixingTimeResult {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

/// First crossing of `epsilon` by the exact distance curve.
///
/// A geometric grid (ratio `2^{1/4}`) seeded at `hint/64` is scanned upward
/// until the first point at or below `epsilon`; the crossing is then
/// bisected until the bracket is narrower than `1e-3 · t_rel`.
pub fn mixing_time(params: &ModelParams, epsilon: f64, target: Target) -> Result<MixingTimeResult> {
    mixing_time_with_hint(params, epsilon, target, None)
}

pub fn mixing_time_with_hint(
    params: &ModelParams,
    epsilon: f64,
    target: Target,
    t_hint: Option<f64>,
) -> Result<MixingTimeResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("epsilon {epsilon} outside (0, 1)")));
    }
    let times = params.predicted_times();
    let horizon = HORIZON_FACTOR * times.regular.max(times.heavy).max(params.relaxation_time());
    let mut evaluations = 1;
    let d0 = target.distance(params, 0.0);
    if d0 <= epsilon {
        return Ok(MixingTimeResult {
            epsilon,
            target,
            t_mix: 0.0,
            lower: 0.0,
            upper: 0.0,
            distance_at_lower: d0,
            distance_at_upper: d0,
            evaluations,
        });
    }

    let hint = t_hint.filter(|h| *h > 0.0).unwrap_or_else(|| target.hint(params));
    let ratio = 2f64.powf(0.25);
    let (mut lo, mut d_lo) = (0.0, d0);
    let mut t = hint / 64.0;
    let (mut hi, mut d_hi) = loop {
        if t > horizon {
            let d = target.distance(params, horizon);
            evaluations += 1;
            if d <= epsilon {
                break (horizon, d);
            }
            return Err(Error::NoCrossing { epsilon, horizon });
        }
        let d = target.distance(params, t);
        evaluations += 1;
        if d <= epsilon {
            break (t, d);
        }
        lo = t;
        d_lo = d;
        t *= ratio;
    };

    let resolution = BRACKET_RESOLUTION * params.relaxation_time();
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let d = target.distance(params, mid);
        evaluations += 1;
        if d <= epsilon {
            hi = mid;
            d_hi = d;
        } else {
            lo = mid;
            d_lo = d;
        }
    }
    debug_assert!(d_lo > epsilon && d_hi <= epsilon);
    Ok(MixingTimeResult {
        epsilon,
        target,
        t_mix: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        distance_at_lower: d_lo,
        distance_at_upper: d_hi,
        evaluations,
    })
}

/// Chain `t_mix(epsilon) / t_rel`.
pub fn product_condition_ratio(params: &ModelParams, epsilon: f64) -> Result<f64> {
    Ok(mixing_time(params, epsilon, Target::Chain)?.t_mix / params.relaxation_time())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub offset: f64,
    /// `center + offset · unit`, floored at 0.
    pub t: f64,
    pub value: f64,
}

/// Distance curve around a cutoff location.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TvCurve {
    pub target: Target,
    pub center_time: f64,
    pub window_unit: f64,
    pub points: Vec<ProfilePoint>,
}

/// Default window unit: `t_rel` in the delayed regime, 1 otherwise.
pub fn default_window_unit(params: &ModelParams, target: Target) -> f64 {
    let delayed = match target {
        Target::Observable => params.gamma() >= 0.0,
        Target::Chain => params.tilde_gamma() >= 0.0,
    };
    if delayed {
        params.relaxation_time()
    } else {
        1.0
    }
}

/// Evaluates the distance at `center_time + offset · window_unit`.
///
/// Times that would be negative are evaluated at 0.
pub fn cutoff_profile(
    params: &ModelParams,
    target: Target,
    center_time: f64,
    window_unit: f64,
    offsets: &[f64],
) -> TvCurve {
    let points = offsets
        .par_iter()
        .map(|&offset| {
            let t = (center_time + offset * window_unit).max(0.0);
            ProfilePoint {
                offset,
                t,
                value: target.distance(params, t),
            }
        })
        .collect();
    TvCurve {
        target,
        center_time,
        window_unit,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HeavyRule, RateRule};

    fn family(heavy: HeavyRule, rate: RateRule, sizes: &[usize]) -> ParamFamily {
        ParamFamily::new(heavy, rate, sizes.to_vec()).unwrap()
    }

    fn insensitive() -> ParamFamily {
        family(HeavyRule::Power { exponent: 0.25 }, RateRule::Constant { alpha: 0.9 }, &[1000, 10_000, 100_000])
    }

    fn delayed() -> ParamFamily {
        family(HeavyRule::Power { exponent: 0.75 }, RateRule::Constant { alpha: 0.2 }, &[1000, 10_000, 100_000])
    }

    fn no_cutoff() -> ParamFamily {
        family(HeavyRule::SqrtScaled { scale: 1.0, ell: 2.0 }, RateRule::OverLogN { a: 1.0 }, &[1000, 10_000, 100_000])
    }

    #[test]
    fn classify_insensitivity() {
        let r = classify(&insensitive(), ClassifyMode::Extrapolate).unwrap();
        assert_eq!(r.observable_regime, Regime::Insensitivity);
        let g = r.gamma_inf.finite().unwrap();
        assert!(g < 0.0 && (g + 1.5556).abs() < 0.01, "{g}");
        assert_eq!(r.chain_regime, Regime::Insensitivity);
        assert_eq!(r.schema, "regime-report/1");
    }

    #[test]
    fn classify_delayed() {
        let r = classify(&delayed(), ClassifyMode::Extrapolate).unwrap();
        assert_eq!(r.observable_regime, Regime::DelayedCutoff);
        assert!((r.gamma_inf.finite().unwrap() - 1.5).abs() < 1e-3);
        assert_eq!(r.ell, Limit::Infinite);
        let n = 100_000f64;
        assert!((r.predicted_times.delayed - 1.25 * n.ln()).abs() < 1e-3);
        assert_eq!(r.chain_regime, Regime::DelayedCutoff);
    }

    #[test]
    fn classify_no_cutoff() {
        let r = classify(&no_cutoff(), ClassifyMode::Extrapolate).unwrap();
        assert_eq!(r.observable_regime, Regime::NoCutoff);
        assert!((r.ell.finite().unwrap() - 2.0).abs() < 0.01);
        assert!((r.gamma_inf.finite().unwrap() - 1.0).abs() < 0.01);
    }

    #[test]
    fn classify_bounded_m_chain() {
        // γ̃ decays like 1/log N, so the sizes must be close for 5% agreement.
        let f = family(HeavyRule::Constant { m: 3 }, RateRule::OverLogN { a: 0.1 }, &[1_000_000, 2_000_000]);
        let r = classify(&f, ClassifyMode::Extrapolate).unwrap();
        assert_eq!(r.chain_regime, Regime::NoCutoff);
        assert!(matches!(r.m_divergence, Limit::Finite(_)));
    }

    #[test]
    fn oscillating_is_undetermined() {
        // γ moves by more than 5% between the two largest sizes.
        let f = family(HeavyRule::Power { exponent: 0.6 }, RateRule::OverLogN { a: 1.0 }, &[100, 100_000]);
        let r = classify(&f, ClassifyMode::Extrapolate).unwrap();
        assert_eq!(r.observable_regime, Regime::Undetermined);
    }

    #[test]
    fn declared_matches_extrapolated() {
        let cases = [
            (insensitive(), DeclaredLimits {
                gamma_inf: -0.5 / 0.9 - 1.0,
                tilde_gamma_inf: 0.25 - 0.9,
                ell: Some(f64::NEG_INFINITY),
                m_diverges: true,
                expected_observable: None,
                expected_chain: None,
            }),
            (delayed(), DeclaredLimits {
                gamma_inf: 1.5,
                tilde_gamma_inf: 0.55,
                ell: None,
                m_diverges: true,
                expected_observable: Some(Regime::DelayedCutoff),
                expected_chain: Some(Regime::DelayedCutoff),
            }),
            (no_cutoff(), DeclaredLimits {
                gamma_inf: 1.0,
                tilde_gamma_inf: 0.5,
                ell: Some(2.0),
                m_diverges: true,
                expected_observable: Some(Regime::NoCutoff),
                expected_chain: None,
            }),
        ];
        for (f, d) in cases {
            let a = classify(&f, ClassifyMode::Extrapolate).unwrap();
            let b = classify(&f, ClassifyMode::Declared(d)).unwrap();
            assert_eq!(a.observable_regime, b.observable_regime);
            assert_eq!(a.chain_regime, b.chain_regime);
        }
    }

    #[test]
    fn contradictory_declarations() {
        let d = DeclaredLimits {
            gamma_inf: -0.3,
            tilde_gamma_inf: -0.1,
            ell: Some(1.0),
            m_diverges: false,
            expected_observable: Some(Regime::DelayedCutoff),
            expected_chain: None,
        };
        let err = classify(&delayed(), ClassifyMode::Declared(d)).unwrap_err();
        assert!(matches!(err, Error::Contradiction(ref msg) if msg.contains("DelayedCutoff")));

        let d = DeclaredLimits {
            gamma_inf: 0.2,
            tilde_gamma_inf: -0.1,
            ell: None,
            m_diverges: true,
            expected_observable: None,
            expected_chain: None,
        };
        let err = classify(&delayed(), ClassifyMode::Declared(d)).unwrap_err();
        assert!(matches!(err, Error::Contradiction(ref msg) if msg.contains("implies gamma_inf < 0")));
    }

    #[test]
    fn mixing_time_classical() {
        let p = ModelParams::new(10_000, 1, 1.0).unwrap();
        let r = mixing_time(&p, 0.25, Target::Observable).unwrap();
        let tr = 0.5 * 10_000f64.ln();
        assert!((r.t_mix - tr).abs() <= 2.0, "{}", r.t_mix);
        assert!(r.distance_at_lower > 0.25 && r.distance_at_upper <= 0.25);
        assert!(r.upper - r.lower <= BRACKET_RESOLUTION);
        assert!(Target::Observable.distance(&p, r.lower) > 0.25);
        assert!(Target::Observable.distance(&p, r.upper) <= 0.25);
        let ratio = product_condition_ratio(&p, 0.25).unwrap();
        assert!((ratio - tr).abs() <= 2.0);
    }

    #[test]
    fn mixing_time_near_start() {
        let p = ModelParams::new(8, 2, 0.5).unwrap();
        let d0 = 1.0 - 2f64.powi(-8);
        let r = mixing_time(&p, d0 + 1e-12, Target::Observable).unwrap();
        assert_eq!(r.t_mix, 0.0);
        assert_eq!((r.lower, r.upper), (0.0, 0.0));
        let r = mixing_time(&p, d0 - 1e-6, Target::Observable).unwrap();
        assert!(r.t_mix < 0.05);
        assert!(mixing_time(&p, 1.0, Target::Observable).is_err());
        assert!(mixing_time(&p, 0.0, Target::Observable).is_err());
    }

    #[test]
    fn chain_dominates_observable() {
        for (n, m, a) in [(50, 10, 0.3), (200, 20, 0.8), (400, 100, 0.1)] {
            let p = ModelParams::new(n, m, a).unwrap();
            for eps in [0.1, 0.25, 0.5] {
                let o = mixing_time(&p, eps, Target::Observable).unwrap();
                let c = mixing_time(&p, eps, Target::Chain).unwrap();
                assert!(c.t_mix >= o.t_mix - (o.half_width() + c.half_width()));
            }
        }
    }

    #[test]
    fn profile_examples() {
        let p = ModelParams::new(2000, 1, 1.0).unwrap();
        let c = cutoff_profile(&p, Target::Observable, p.predicted_times().regular, 1.0, &[-4.0, 4.0]);
        assert!(c.points[0].value - c.points[1].value >= 0.96);
        let c = cutoff_profile(&p, Target::Observable, 2.0, 1.0, &[0.0, 0.0]);
        let exact = dist::observed_tv(&p, 2.0, ScanStrategy::Corners).unwrap();
        assert!(c.points.iter().all(|pt| pt.value == exact));
        let c = cutoff_profile(&p, Target::Chain, 1.0, 5.0, &[-1.0, 0.0, 1.0, 3.0]);
        assert_eq!(c.points[0].t, 0.0);
        assert!(c.points.iter().all(|pt| (0.0..=1.0).contains(&pt.value)));
        assert_eq!(default_window_unit(&ModelParams::new(10_000, 1000, 0.2).unwrap(), Target::Observable), 5.0);
        assert_eq!(default_window_unit(&p, Target::Observable), 1.0);
    }

    #[test]
    fn regime_parsing() {
        assert_eq!("delayed-cutoff".parse::<Regime>().unwrap(), Regime::DelayedCutoff);
        assert_eq!("NoCutoff".parse::<Regime>().unwrap(), Regime::NoCutoff);
        assert!("cutoff".parse::<Regime>().is_err());
    }
}
