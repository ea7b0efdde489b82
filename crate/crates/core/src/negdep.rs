//! Negative dependence of the survival indicators `Z_i(t)`.
//!
//! In the exchangeable coupling each position `i` carries a heavy ball with
//! probability `m/N` (without replacement across positions) and
//! `Z_i(t) = 1` when that ball has not been selected by time `t`. For any
//! index set `A`, the number of heavy balls in `A` is hypergeometric, so
//!
//! ```text
//! E[∏_{i∈A} Z_i] = e^{-t|A|} E[u^H],   ∏_{i∈A} E[Z_i] = e^{-t|A|} E[u^B],
//! ```
//!
//! with `u = e^{(1-α)t} ≥ 1`, `H ~ Hypergeom(N, m, |A|)`, `B ~ Bin(|A|, m/N)`.
//! The factorial moments of `B` dominate those of `H`, hence `E[u^B] ≥ E[u^H]`
//! and the joint moments never exceed the products of the means.

use serde::Serialize;

use crate::dist::{self, choose_u128, hypergeometric_point, SurvivalPair};
use crate::model::{InitialState, ModelParams};
use crate::{Error, Result};

/// Largest number of heavy placements enumerated by the brute-force oracles.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;
/// Largest `N` for which [`exact_chi_square`] enumerates `{0,1}^N`.
pub const CHI_SQUARE_MAX_BALLS: usize = 10;
/// A report passes when every slack is at least `-SLACK_TOLERANCE`.
pub const SLACK_TOLERANCE: f64 = 1e-12;

/// `E[Z_i(t)] = (m/N) e^{-αt} + ((N - m)/N) e^{-t}`.
pub fn mean_z(params: &ModelParams, t: f64) -> f64 {
    let s = SurvivalPair::at(params, t);
    let n = params.total_balls() as f64;
    (params.heavy_count() as f64 * s.heavy_survival + params.regular_count() as f64 * s.regular_survival) / n
}

fn check_size(params: &ModelParams, size: usize) -> Result<()> {
    if size == 0 || size > params.total_balls() {
        return Err(Error::domain(format!(
            "subset size {size} outside [1, {}]",
            params.total_balls()
        )));
    }
    Ok(())
}

/// `E[∏_{i∈A} Z_i(t)]` for any `|A| = size`, as a hypergeometric mixture.
pub fn joint_moment(params: &ModelParams, t: f64, size: usize) -> Result<f64> {
    check_size(params, size)?;
    if size == 1 {
        return Ok(mean_z(params, t));
    }
    let s = SurvivalPair::at(params, t);
    let (n, m) = (params.total_balls(), params.heavy_count());
    let lo = size.saturating_sub(n - m);
    let hi = size.min(m);
    Ok((lo..=hi)
        .map(|a| {
            hypergeometric_point(a, n, m, size)
                * s.heavy_survival.powi(a as i32)
                * s.regular_survival.powi((size - a) as i32)
        })
        .sum())
}

/// `∏_{i∈A} E[Z_i(t)] = E[Z_1]^size`.
pub fn product_moment(params: &ModelParams, t: f64, size: usize) -> Result<f64> {
    check_size(params, size)?;
    Ok(mean_z(params, t).powi(size as i32))
}

fn check_enumeration(params: &ModelParams) -> Result<u128> {
    let placements = choose_u128(params.total_balls(), params.heavy_count());
    if placements > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "heavy-placement enumeration",
            required: placements,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(placements)
}

/// Visits every `k`-subset of `{0..n}` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Rightmost index that can still advance.
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Averages `∏_{i∈subset} (V_i e^{-αt} + (1 - V_i) e^{-t})` over every
/// placement `V` of the `m` heavy balls among `N` positions.
pub fn brute_force_joint_moment_for(params: &ModelParams, t: f64, subset: &[usize]) -> Result<f64> {
    let n = params.total_balls();
    if subset.is_empty() || subset.iter().any(|&i| i >= n) {
        return Err(Error::domain("subset must be a non-empty set of positions below N"));
    }
    let placements = check_enumeration(params)?;
    let s = SurvivalPair::at(params, t);
    let mut heavy = vec![false; n];
    let mut total = 0.0;
    for_each_subset(n, params.heavy_count(), |chosen| {
        heavy.iter_mut().for_each(|v| *v = false);
        chosen.iter().for_each(|&i| heavy[i] = true);
        total += subset
            .iter()
            .map(|&i| if heavy[i] { s.heavy_survival } else { s.regular_survival })
            .product::<f64>();
    });
    Ok(total / placements as f64)
}

/// Brute force over placements for the subset `{0, …, size - 1}`.
pub fn brute_force_joint_moment(params: &ModelParams, t: f64, size: usize) -> Result<f64> {
    check_size(params, size)?;
    let subset: Vec<usize> = (0..size).collect();
    brute_force_joint_moment_for(params, t, &subset)
}

fn falling(x: f64, k: usize) -> f64 {
    (0..k).map(|i| x - i as f64).product()
}

/// Factorial moments `E[(B)_k]` and `E[(H)_k]` for `|A| = size`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FactorialMoments {
    pub binomial: f64,
    pub hypergeometric: f64,
}

/// `(size)_k (m/N)^k` against `(size)_k (m)_k / (N)_k`.
pub fn factorial_moment_comparison(size: usize, k: usize, params: &ModelParams) -> Result<FactorialMoments> {
    if k == 0 {
        return Err(Error::domain("factorial moment order must be at least 1"));
    }
    let (n, m) = (params.total_balls() as f64, params.heavy_count() as f64);
    let lead = falling(size as f64, k);
    let hyper = if k > params.total_balls() {
        0.0
    } else {
        lead * falling(m, k) / falling(n, k)
    };
    Ok(FactorialMoments {
        binomial: lead * (m / n).powi(k as i32),
        hypergeometric: hyper,
    })
}

/// Generating functions `E[u^B]` and `E[u^H]` at `u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeneratingPair {
    pub binomial: f64,
    pub hypergeometric: f64,
}

/// `E[u^B]` and `E[u^H]` by direct summation; requires `u ≥ 1`.
pub fn mgf_compare(u: f64, size: usize, params: &ModelParams) -> Result<GeneratingPair> {
    if !(u >= 1.0) {
        return Err(Error::domain(format!("u = {u} must be at least 1")));
    }
    check_size(params, size)?;
    let (n, m) = (params.total_balls(), params.heavy_count());
    let b = dist::binomial_pmf(size, m as f64 / n as f64)?;
    let binomial = b
        .values()
        .iter()
        .enumerate()
        .map(|(k, p)| p * u.powi(k as i32))
        .sum();
    let hypergeometric = (0..=size)
        .map(|k| hypergeometric_point(k, n, m, size) * u.powi(k as i32))
        .sum();
    Ok(GeneratingPair {
        binomial,
        hypergeometric,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NegDepRow {
    pub size: usize,
    pub joint_moment: f64,
    pub product_moment: f64,
    /// `product_moment - joint_moment`; never negative under negative dependence.
    pub slack: f64,
    /// Brute-force value, when the placement count is within the guard.
    pub brute_force: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegDepReport {
    pub params: ModelParams,
    pub t: f64,
    pub rows: Vec<NegDepRow>,
    pub min_slack: f64,
    /// Largest `|joint_moment - brute_force|`, when the oracle ran.
    pub oracle_max_error: Option<f64>,
    pub pass: bool,
}

/// Compares joint and product moments for every subset size up to `max_size`.
pub fn verify_negative_dependence(params: &ModelParams, t: f64, max_size: usize) -> Result<NegDepReport> {
    check_size(params, max_size)?;
    let oracle = check_enumeration(params).is_ok();
    let rows = (1..=max_size)
        .map(|size| {
            let joint_moment = joint_moment(params, t, size)?;
            let product_moment = product_moment(params, t, size)?;
            let brute_force = if oracle {
                Some(brute_force_joint_moment(params, t, size)?)
            } else {
                None
            };
            Ok(NegDepRow {
                size,
                joint_moment,
                product_moment,
                slack: product_moment - joint_moment,
                brute_force,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let oracle_max_error = oracle.then(|| {
        rows.iter()
            .filter_map(|r| r.brute_force.map(|b| (b - r.joint_moment).abs()))
            .fold(0.0, f64::max)
    });
    Ok(NegDepReport {
        params: *params,
        t,
        rows,
        min_slack,
        oracle_max_error,
        pass: min_slack >= -SLACK_TOLERANCE,
    })
}

/// `∏_{i=1}^N (1 + E[Z_i]²) - 1`, the chi-square bound.
pub fn chi_square_bound(params: &ModelParams, t: f64) -> f64 {
    let z = mean_z(params, t);
    (params.total_balls() as f64 * (z * z).ln_1p()).exp_m1()
}

/// Exact `‖μ_t/π - 1‖²_{L²(π)}` for the coupled configuration `X(t) ∈ {0,1}^N`.
///
/// Under the uniform permutation every arrangement of the labels
/// (species, initial urn) over the `N` positions is equally likely. For a
/// fixed arrangement the positions are independent, with `X_i` equal to
/// its initial urn with probability `(1 + s_i)/2`. The law `μ_t` is the
/// average of these product laws over all
/// `C(N, m) · C(n, r) · C(m, h)` arrangements.
pub fn exact_chi_square(params: &ModelParams, init: InitialState, t: f64) -> Result<f64> {
    let n_balls = params.total_balls();
    if n_balls > CHI_SQUARE_MAX_BALLS {
        return Err(Error::Capacity {
            what: "configuration-space enumeration (balls)",
            required: n_balls as u128,
            limit: CHI_SQUARE_MAX_BALLS as u128,
        });
    }
    let init = InitialState::new(params, init.regular_left, init.heavy_left)?;
    let (n, m) = (params.regular_count(), params.heavy_count());
    let s = SurvivalPair::at(params, t);
    let states = 1usize << n_balls;

    let mut mu = vec![0.0; states];
    let mut product = vec![0.0; states];
    let mut positions_heavy = vec![false; n_balls];
    let mut y = vec![false; n_balls];
    let mut arrangements = 0u64;

    for_each_subset(n_balls, m, |heavy_pos| {
        positions_heavy.iter_mut().for_each(|v| *v = false);
        heavy_pos.iter().for_each(|&i| positions_heavy[i] = true);
        let regular_pos: Vec<usize> = (0..n_balls).filter(|&i| !positions_heavy[i]).collect();
        for_each_subset(n, init.regular_left, |reg_left| {
            for_each_subset(m, init.heavy_left, |heavy_left| {
                y.iter_mut().for_each(|v| *v = false);
                reg_left.iter().for_each(|&j| y[regular_pos[j]] = true);
                heavy_left.iter().for_each(|&j| y[heavy_pos[j]] = true);

                // Product law over {0,1}^N, built one position at a time.
                product[0] = 1.0;
                let mut len = 1;
                for i in 0..n_balls {
                    let surv = if positions_heavy[i] { s.heavy_survival } else { s.regular_survival };
                    let (at_one, at_zero) = if y[i] {
                        (0.5 * (1.0 + surv), 0.5 * (1.0 - surv))
                    } else {
                        (0.5 * (1.0 - surv), 0.5 * (1.0 + surv))
                    };
                    for x in 0..len {
                        let p = product[x];
                        product[x] = p * at_zero;
                        product[x + len] = p * at_one;
                    }
                    len *= 2;
                }
                mu.iter_mut().zip(&product).for_each(|(a, b)| *a += b);
                arrangements += 1;
            });
        });
    });

    let norm = arrangements as f64;
    let sum_sq: f64 = mu.iter().map(|v| (v / norm) * (v / norm)).sum();
    Ok(states as f64 * sum_sq - 1.0)
}
