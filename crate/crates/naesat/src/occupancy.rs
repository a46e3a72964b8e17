//! Balls-into-bins computations: the exact occupancy law of empty bins,
//! its binomial approximation, capacity-constrained conditioned models,
//! a Monte-Carlo thrower, and the exact Poissonization equivalence.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::params::RateParams;
use crate::rng::trial_rng;
use crate::{Error, Result};

/// ln C(n, k).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// ln of the Binomial(n, p) pmf at t.
pub fn ln_binomial_pmf(n: u64, p: f64, t: u64) -> f64 {
    if t > n {
        return f64::NEG_INFINITY;
    }
    let q = (-p).ln_1p();
    ln_binomial(n, t) + t as f64 * p.ln() + (n - t) as f64 * q
}

fn big_factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |a, i| a * BigUint::from(i))
}

fn big_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    big_factorial(n) / (big_factorial(k) * big_factorial(n - k))
}

/// Number of surjections from a set of `balls` labeled balls onto `bins`
/// labeled bins, via the recurrence S(b, i) = i (S(b-1, i-1) + S(b-1, i)).
fn surjections(balls: usize, bins: usize) -> Vec<BigUint> {
    // Returns the row S(balls, 0..=bins).
    let mut row = vec![BigUint::zero(); bins + 1];
    row[0] = BigUint::one(); // S(0,0) = 1
    for _b in 1..=balls {
        let mut next = vec![BigUint::zero(); bins + 1];
        for i in 1..=bins {
            let sum = &row[i - 1] + &row[i];
            next[i] = BigUint::from(i) * sum;
        }
        row = next;
    }
    row
}

/// Exact pmf of the number of empty bins when `n_balls` balls are thrown
/// uniformly and independently into `n_bins` bins, as exact rationals.
pub fn empty_bins_exact_rational(n_bins: usize, n_balls: usize) -> Result<Vec<BigRational>> {
    if n_bins == 0 {
        return Err(Error::domain("need at least one bin"));
    }
    if n_bins * n_balls > 10_000_000 {
        return Err(Error::domain("occupancy DP budget exceeded (bins*balls > 1e7)"));
    }
    let surj = surjections(n_balls, n_bins);
    let denom = BigUint::from(n_bins).pow(n_balls as u32);
    let mut pmf = Vec::with_capacity(n_bins + 1);
    for e in 0..=n_bins {
        let occupied = n_bins - e;
        let ways = big_binomial(n_bins, e) * &surj[occupied];
        pmf.push(BigRational::new(ways.into(), denom.clone().into()));
    }
    Ok(pmf)
}

/// Exact pmf of the number of empty bins, as f64. Uses the rational path
/// for small sizes and a log-space surjection DP within the stated budget
/// (bins*balls <= 1e7) otherwise.
pub fn empty_bins_exact(n_bins: usize, n_balls: usize) -> Result<Vec<f64>> {
    if n_bins == 0 {
        return Err(Error::domain("need at least one bin"));
    }
    if n_bins * n_balls <= 40_000 {
        let pmf = empty_bins_exact_rational(n_bins, n_balls)?;
        return Ok(pmf
            .iter()
            .map(|q| q.to_f64().expect("probability fits in f64"))
            .collect());
    }
    if n_bins * n_balls > 10_000_000 {
        return Err(Error::domain("occupancy DP budget exceeded (bins*balls > 1e7)"));
    }
    // Log-space surjection counts. All sums are of positive terms, so the
    // recurrence is numerically stable.
    let mut row = vec![f64::NEG_INFINITY; n_bins + 1];
    row[0] = 0.0;
    for _b in 1..=n_balls {
        let mut next = vec![f64::NEG_INFINITY; n_bins + 1];
        for i in 1..=n_bins {
            let s = log_add(row[i - 1], row[i]);
            next[i] = (i as f64).ln() + s;
        }
        row = next;
    }
    let ln_total = n_balls as f64 * (n_bins as f64).ln();
    Ok((0..=n_bins)
        .map(|e| {
            let occupied = n_bins - e;
            (ln_binomial(n_bins as u64, e as u64) + row[occupied] - ln_total).exp()
        })
        .collect())
}

#[inline]
fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Binomial approximation of the free-variable count probability:
/// the exact Bin(n, e^{-lambda}) log-pmf at the rounded target
/// (1-beta) e^{-lambda} n, together with the closed-form rate f(beta)
/// it converges to (per-n, up to O(4^{-k})).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinApprox {
    /// Rounded target count.
    pub target: u64,
    /// The unrounded real target (1-beta) e^{-lambda} n.
    pub exact_target: f64,
    /// ln Pr[Bin(n, e^{-lambda}) = target].
    pub log_pmf: f64,
    /// log_pmf / n.
    pub per_n_log: f64,
    /// f(beta) = -((1-beta) ln(1-beta) + beta) e^{-lambda}.
    pub f_beta: f64,
}

pub fn empty_bins_binapprox(n: usize, params: &RateParams, beta: f64) -> Result<BinApprox> {
    let q = params.exp_neg_lambda();
    let exact_target = (1.0 - beta) * q * n as f64;
    let target = exact_target.round();
    if target < 0.0 || target > n as f64 {
        return Err(Error::domain(format!(
            "target {exact_target} outside [0, {n}]"
        )));
    }
    let target = target as u64;
    let log_pmf = ln_binomial_pmf(n as u64, q, target);
    Ok(BinApprox {
        target,
        exact_target,
        log_pmf,
        per_n_log: log_pmf / n as f64,
        f_beta: crate::rate::f_rate(params, beta),
    })
}

/// Per-bin capacity in the conditioned model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Capacity {
    /// The bin has this many slots; its load is Bin(slots, per_slot_prob).
    Finite(usize),
    /// Poissonized bin (the exact equivalent of a multinomial throw when
    /// every bin is unbounded): load is Poisson with the common mean
    /// total_balls / n_bins. Conditioning on the total removes the mean,
    /// so any common value gives the same law.
    Unbounded,
}

/// Capacity-constrained conditioned occupancy model: independent per-bin
/// loads B_i conditioned on the total T = total_balls, with the event that
/// no load exceeds hard_cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyModel {
    pub capacities: Vec<Capacity>,
    /// Uniform cap (the analysis uses 3k); None = no cap.
    pub hard_cap: Option<usize>,
    /// Per-slot occupation probability for Finite bins (lambda/(kr) in the
    /// degree-conditioned analysis).
    pub per_slot_prob: f64,
    pub total_balls: usize,
}

impl OccupancyModel {
    /// The model for a degree sequence: bin x has min(d_x) slots, caps 3k.
    pub fn for_degrees(degrees: &[usize], params: &RateParams, total_balls: usize) -> Self {
        let kr = params.k as f64 * params.r;
        OccupancyModel {
            capacities: degrees.iter().map(|&d| Capacity::Finite(d)).collect(),
            hard_cap: Some(3 * params.k as usize),
            per_slot_prob: (params.lambda / kr).min(1.0),
            total_balls,
        }
    }

    /// Poissonized model equivalent to throwing `total` balls uniformly
    /// into `n_bins` bins.
    pub fn multinomial(n_bins: usize, total: usize) -> Self {
        OccupancyModel {
            capacities: vec![Capacity::Unbounded; n_bins],
            hard_cap: None,
            per_slot_prob: 0.5,
            total_balls: total,
        }
    }

    fn bin_log_pmf(&self, cap: Capacity, max_load: usize) -> Vec<f64> {
        match cap {
            Capacity::Finite(c) => {
                let hi = c.min(max_load);
                (0..=hi)
                    .map(|j| ln_binomial_pmf(c as u64, self.per_slot_prob, j as u64))
                    .collect()
            }
            Capacity::Unbounded => {
                let mu = self.total_balls as f64 / self.capacities.len() as f64;
                let mu = if mu > 0.0 { mu } else { 1.0 };
                (0..=max_load)
                    .map(|j| -mu + j as f64 * mu.ln() - ln_gamma(j as f64 + 1.0))
                    .collect()
            }
        }
    }
}

/// Result of [`capacitated_conditioned_prob`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionedProb {
    /// ln Pr[X_0 = target ∧ X_{>hard_cap} = 0 | T = total]; -inf if the
    /// event has probability zero.
    pub log_prob: f64,
    pub feasible: bool,
    pub log_numerator: f64,
    pub log_denominator: f64,
}

/// Exact evaluation of Pr[X_0 = target_empty ∧ no load exceeds hard_cap
/// | T = total_balls] by dynamic programming over bins, tracking (balls
/// used, empty bins so far). The denominator Pr[T = total] carries no cap
/// constraint, matching the conditioning event.
pub fn capacitated_conditioned_prob(
    model: &OccupancyModel,
    target_empty: usize,
) -> Result<ConditionedProb> {
    let n = model.capacities.len();
    if n == 0 {
        return Err(Error::domain("need at least one bin"));
    }
    if target_empty > n {
        return Err(Error::domain("target_empty exceeds bin count"));
    }
    let total = model.total_balls;
    if n * total > 10_000_000 {
        return Err(Error::domain("occupancy DP budget exceeded (bins*total > 1e7)"));
    }

    // Numerator DP: joint over (balls used, empties), loads capped.
    let capped = |c: Capacity| -> usize {
        let hc = model.hard_cap.unwrap_or(total);
        match c {
            Capacity::Finite(f) => f.min(hc).min(total),
            Capacity::Unbounded => hc.min(total),
        }
    };
    // Linear-space DP with running log scale to avoid underflow.
    let width = total + 1;
    let mut dp = vec![0.0f64; width * (n + 1)];
    dp[0] = 1.0;
    let mut log_scale = 0.0f64;
    for (bi, &cap) in model.capacities.iter().enumerate() {
        let hi = capped(cap);
        let pmf: Vec<f64> = model
            .bin_log_pmf(cap, hi)
            .into_iter()
            .map(f64::exp)
            .collect();
        let mut next = vec![0.0f64; width * (n + 1)];
        let max_e = bi; // at most bi bins processed so far can be empty
        for e in 0..=max_e {
            for b in 0..=total {
                let cur = dp[e * width + b];
                if cur == 0.0 {
                    continue;
                }
                let jmax = hi.min(total - b);
                for (j, &pj) in pmf.iter().take(jmax + 1).enumerate() {
                    let ne = if j == 0 { e + 1 } else { e };
                    next[ne * width + b + j] += cur * pj;
                }
            }
        }
        dp = next;
        let m = dp.iter().cloned().fold(0.0f64, f64::max);
        if m > 0.0 && m < 1e-100 {
            for v in dp.iter_mut() {
                *v /= m;
            }
            log_scale += m.ln();
        }
    }
    let numerator = dp[target_empty * width + total];
    let log_numerator = if numerator > 0.0 {
        numerator.ln() + log_scale
    } else {
        f64::NEG_INFINITY
    };

    // Denominator DP: Pr[T = total], no caps beyond the physical slots.
    let mut den = vec![0.0f64; width];
    den[0] = 1.0;
    let mut den_scale = 0.0f64;
    for &cap in &model.capacities {
        let hi = match cap {
            Capacity::Finite(f) => f.min(total),
            Capacity::Unbounded => total,
        };
        let pmf: Vec<f64> = model
            .bin_log_pmf(cap, hi)
            .into_iter()
            .map(f64::exp)
            .collect();
        let mut next = vec![0.0f64; width];
        for b in 0..=total {
            let cur = den[b];
            if cur == 0.0 {
                continue;
            }
            let jmax = hi.min(total - b);
            for (j, &pj) in pmf.iter().take(jmax + 1).enumerate() {
                next[b + j] += cur * pj;
            }
        }
        den = next;
        let m = den.iter().cloned().fold(0.0f64, f64::max);
        if m > 0.0 && m < 1e-100 {
            for v in den.iter_mut() {
                *v /= m;
            }
            den_scale += m.ln();
        }
    }
    let log_denominator = if den[total] > 0.0 {
        den[total].ln() + den_scale
    } else {
        f64::NEG_INFINITY
    };
    if log_denominator == f64::NEG_INFINITY {
        return Err(Error::domain("conditioning event T = total has probability zero"));
    }
    let log_prob = log_numerator - log_denominator;
    Ok(ConditionedProb {
        log_prob,
        feasible: log_numerator > f64::NEG_INFINITY,
        log_numerator,
        log_denominator,
    })
}

/// Empirical statistics from the sequential slot-throwing simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThrowStats {
    pub trials: u64,
    /// Joint empirical pmf over (empty count, max load).
    pub joint_pmf: BTreeMap<(usize, usize), f64>,
    /// Marginal empirical pmf of the empty count.
    pub empty_pmf: Vec<f64>,
    pub mean_empty: f64,
    /// Half-width of the 95% CI on mean_empty.
    pub mean_empty_ci95: f64,
}

/// Simulate the slot-sequential throw: each ball picks a uniformly random
/// remaining slot. Requires finite capacities with enough total slots.
pub fn capacitated_throw_mc(model: &OccupancyModel, trials: u64, seed: u64) -> Result<ThrowStats> {
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    let caps: Vec<usize> = model
        .capacities
        .iter()
        .map(|c| match c {
            Capacity::Finite(f) => Ok(*f),
            Capacity::Unbounded => Err(Error::domain(
                "the slot-sequential simulation needs finite capacities",
            )),
        })
        .collect::<Result<_>>()?;
    let slots: usize = caps.iter().sum();
    if slots < model.total_balls {
        return Err(Error::domain("fewer slots than balls"));
    }
    let n = caps.len();
    let mut joint: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut empty_counts = vec![0u64; n + 1];
    let (mut sum, mut sumsq) = (0.0f64, 0.0f64);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let mut load = vec![0usize; n];
        let mut free = caps.clone();
        let mut free_total = slots;
        for _ in 0..model.total_balls {
            let mut pick = rng.gen_range(0..free_total);
            for (i, &f) in free.iter().enumerate() {
                if pick < f {
                    load[i] += 1;
                    free[i] -= 1;
                    free_total -= 1;
                    break;
                }
                pick -= f;
            }
        }
        let empty = load.iter().filter(|&&l| l == 0).count();
        let maxload = load.iter().copied().max().unwrap_or(0);
        *joint.entry((empty, maxload)).or_insert(0) += 1;
        empty_counts[empty] += 1;
        sum += empty as f64;
        sumsq += (empty * empty) as f64;
    }
    let tf = trials as f64;
    let mean = sum / tf;
    let var = (sumsq / tf - mean * mean).max(0.0);
    Ok(ThrowStats {
        trials,
        joint_pmf: joint
            .into_iter()
            .map(|(k, v)| (k, v as f64 / tf))
            .collect(),
        empty_pmf: empty_counts.iter().map(|&c| c as f64 / tf).collect(),
        mean_empty: mean,
        mean_empty_ci95: 1.96 * (var / tf).sqrt(),
    })
}

/// Exact check that i.i.d. Poisson loads conditioned on their sum follow
/// the multinomial throw law on every composition, in rational arithmetic,
/// for each of the rates 1/2, 1 and 7 (the conditioning removes the rate).
pub fn poissonization_equiv_check(n_bins: usize, total: usize) -> bool {
    let lambdas = [
        BigRational::new(1.into(), 2.into()),
        BigRational::from_integer(1.into()),
        BigRational::from_integer(7.into()),
    ];
    let compositions = enumerate_compositions(n_bins, total);
    let n_pow = BigRational::from_integer(BigUint::from(n_bins).pow(total as u32).into());
    let total_fact = BigRational::from_integer(big_factorial(total).into());
    for lambda in &lambdas {
        // Unnormalized Poisson weights lambda^{b_i}/b_i!; the normalizer is
        // their sum over compositions.
        let weights: Vec<BigRational> = compositions
            .iter()
            .map(|comp| {
                comp.iter().fold(BigRational::one(), |acc, &b| {
                    let pow = num_traits::pow::pow(lambda.clone(), b);
                    acc * pow / BigRational::from_integer(big_factorial(b).into())
                })
            })
            .collect();
        let norm: BigRational = weights.iter().cloned().sum();
        for (comp, w) in compositions.iter().zip(&weights) {
            let conditioned = w / &norm;
            // Multinomial: total!/(prod b_i!) / n^total.
            let denom: BigRational = comp.iter().fold(BigRational::one(), |acc, &b| {
                acc * BigRational::from_integer(big_factorial(b).into())
            });
            let multinomial = &total_fact / denom / &n_pow;
            if conditioned != multinomial {
                return false;
            }
        }
    }
    true
}

fn enumerate_compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(idx: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == cur.len() - 1 {
            cur[idx] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[idx] = v;
            rec(idx + 1, left - v, cur, out);
        }
    }
    rec(0, total, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_bins_one_ball() {
        let pmf = empty_bins_exact(2, 1).unwrap();
        assert_eq!(pmf.len(), 3);
        assert!((pmf[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_balls_all_empty() {
        let pmf = empty_bins_exact(4, 0).unwrap();
        assert!((pmf[4] - 1.0).abs() < 1e-15);
        assert!(pmf[..4].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn three_bins_three_balls_surjective() {
        // P[no empty bin] = 3!/27 = 2/9.
        let pmf = empty_bins_exact(3, 3).unwrap();
        assert!((pmf[0] - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn exact_matches_exhaustive_throw() {
        // 4 bins, 5 balls: enumerate all 4^5 outcomes.
        let mut counts = [0u64; 5];
        for code in 0..4u64.pow(5) {
            let mut c = code;
            let mut load = [0u32; 4];
            for _ in 0..5 {
                load[(c % 4) as usize] += 1;
                c /= 4;
            }
            let empty = load.iter().filter(|&&l| l == 0).count();
            counts[empty] += 1;
        }
        let pmf = empty_bins_exact(4, 5).unwrap();
        for e in 0..=4 {
            let expect = counts[e] as f64 / 1024.0;
            assert!((pmf[e] - expect).abs() < 1e-14, "e = {e}");
        }
    }

    #[test]
    fn pmf_sums_to_one_logspace_path() {
        // Force the log-space branch with a larger instance.
        let pmf = empty_bins_exact(300, 900).unwrap();
        let s: f64 = pmf.iter().sum();
        assert!((s - 1.0).abs() < 1e-10, "sum = {s}");
    }

    #[test]
    fn binapprox_beta_one_is_all_blocked() {
        let params = RateParams::new(6, 15.0).unwrap();
        let n = 500;
        let a = empty_bins_binapprox(n, &params, 1.0).unwrap();
        assert_eq!(a.target, 0);
        let q = params.exp_neg_lambda();
        let expect = n as f64 * (-q).ln_1p();
        assert!((a.log_pmf - expect).abs() < 1e-9);
    }

    #[test]
    fn conditioned_poissonized_equals_multinomial() {
        let model = OccupancyModel::multinomial(6, 8);
        let exact = empty_bins_exact(6, 8).unwrap();
        for e in 0..=5 {
            let c = capacitated_conditioned_prob(&model, e).unwrap();
            if exact[e] > 0.0 {
                assert!(
                    (c.log_prob.exp() - exact[e]).abs() < 1e-13,
                    "e = {e}: {} vs {}",
                    c.log_prob.exp(),
                    exact[e]
                );
            } else {
                assert!(!c.feasible);
            }
        }
    }

    #[test]
    fn single_bin_truncated_binomial() {
        let model = OccupancyModel {
            capacities: vec![Capacity::Finite(10)],
            hard_cap: Some(10),
            per_slot_prob: 0.3,
            total_balls: 4,
        };
        let c = capacitated_conditioned_prob(&model, 0).unwrap();
        // With one bin the conditional is certain: load 4 > 0 empties 0.
        assert!((c.log_prob - 0.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_target_flagged() {
        // 2 bins, 2 balls, but demand 2 empty bins.
        let model = OccupancyModel::multinomial(2, 2);
        let c = capacitated_conditioned_prob(&model, 2).unwrap();
        assert!(!c.feasible);
        assert_eq!(c.log_prob, f64::NEG_INFINITY);
    }

    #[test]
    fn throw_mc_forced_full() {
        let model = OccupancyModel {
            capacities: vec![Capacity::Finite(1), Capacity::Finite(1)],
            hard_cap: None,
            per_slot_prob: 0.5,
            total_balls: 2,
        };
        let s = capacitated_throw_mc(&model, 200, 11).unwrap();
        assert!((s.empty_pmf[0] - 1.0).abs() < 1e-12);
        assert_eq!(s.mean_empty, 0.0);
    }

    #[test]
    fn poissonization_small_cases() {
        assert!(poissonization_equiv_check(2, 2));
        assert!(poissonization_equiv_check(3, 4));
    }
}
