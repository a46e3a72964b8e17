//! Support-count skew under beta-window conditioning.
//!
//! Samples random formulas conditioned on the all-true assignment being a
//! solution (signs per clause are uniform over the non-constant patterns,
//! which makes the conditioning exact rather than rejection-based), then
//! rejection-filters on the solution's beta falling in a window, and
//! reports the pooled empirical distribution of per-variable support
//! counts with distances to the Poisson and exact binomial references.
//! Demonstrative at desk scale; never an acceptance gate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::formula::{beta_of_free_count, BetaWindow, Formula, Lit};
use crate::occupancy::ln_binomial_pmf;
use crate::params::RateParams;
use crate::rng::trial_rng;
use crate::space::pairs::positional_support_counts;
use crate::{Error, Result};

/// Minimum fraction of attempts that must be accepted once the attempt
/// budget is spent.
const ACCEPTANCE_FLOOR: f64 = 1e-3;

/// Pooled empirical support-count distribution under the conditioning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewReport {
    pub attempts: u64,
    pub accepted: u64,
    /// counts[s] = number of (variable, accepted formula) observations
    /// with support count s.
    pub counts: Vec<u64>,
    pub pmf: Vec<f64>,
    /// True when no trial was requested or accepted.
    pub empty: bool,
    pub lambda: f64,
    /// Total variation distance to Poisson(lambda).
    pub tv_to_poisson: f64,
    /// Total variation distance to the exact unconditioned law
    /// Bin(m, k/(n(2^{k-1}-1))).
    pub tv_to_binomial: f64,
}

fn tv_distance(pmf: &[f64], reference: impl Fn(usize) -> f64, support: usize) -> f64 {
    let mut tv = 0.0;
    let mut ref_mass = 0.0;
    for s in 0..support {
        let p = pmf.get(s).copied().unwrap_or(0.0);
        let q = reference(s);
        ref_mass += q;
        tv += (p - q).abs();
    }
    // Reference mass beyond the tracked support counts fully against us.
    (tv + (1.0 - ref_mass).max(0.0)) / 2.0
}

/// Sample one formula whose clauses all have non-constant sign patterns
/// (so the all-true assignment is a solution).
fn sample_conditioned_formula<R: Rng>(n: usize, m: usize, k: usize, rng: &mut R) -> Formula {
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let mask = loop {
            let mask: u64 = rng.gen_range(0..(1u64 << k));
            if mask != 0 && mask != (1u64 << k) - 1 {
                break mask;
            }
        };
        let clause: Vec<Lit> = (0..k)
            .map(|j| Lit::new(rng.gen_range(0..n), mask >> j & 1 == 1))
            .collect();
        clauses.push(clause);
    }
    Formula::new(k, n, clauses).expect("sampled clauses are well-formed")
}

/// Run the conditioned experiment.
pub fn conditioned_support_skew(
    n: usize,
    m: usize,
    k: usize,
    window: BetaWindow,
    trials: u64,
    seed: u64,
) -> Result<SkewReport> {
    if k < 3 || n == 0 {
        return Err(Error::domain("need k >= 3 and n >= 1"));
    }
    let params = RateParams::from_instance(k as u32, n, m)?;
    let lambda = params.lambda;
    let budget = (trials.max(1)).saturating_mul(10_000);
    let mut counts: Vec<u64> = Vec::new();
    let mut attempts = 0u64;
    let mut accepted = 0u64;
    while accepted < trials {
        if attempts >= budget {
            return Err(Error::domain(format!(
                "acceptance rate {:.2e} below floor {ACCEPTANCE_FLOOR:.0e} \
                 after {attempts} attempts ({accepted} accepted); widen the \
                 beta window or reduce n",
                accepted as f64 / attempts as f64
            )));
        }
        let mut rng = trial_rng(seed, attempts);
        attempts += 1;
        let f = sample_conditioned_formula(n, m, k, &mut rng);
        let support = positional_support_counts(&f, &crate::Assignment::all_true(n))?;
        let free = support.iter().filter(|&&s| s == 0).count();
        if !window.contains(beta_of_free_count(free, &params, n)) {
            continue;
        }
        accepted += 1;
        for &s in &support {
            if s >= counts.len() {
                counts.resize(s + 1, 0);
            }
            counts[s] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let empty = total == 0;
    let pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect();
    let support = counts.len().max(m + 1);
    let poisson = |s: usize| {
        (-lambda + s as f64 * lambda.ln() - statrs::function::gamma::ln_gamma(s as f64 + 1.0))
            .exp()
    };
    let q = k as f64 / (n as f64 * ((k as f64 - 1.0).exp2() - 1.0));
    let binom = |s: usize| {
        if s > m {
            0.0
        } else {
            ln_binomial_pmf(m as u64, q, s as u64).exp()
        }
    };
    let (tv_to_poisson, tv_to_binomial) = if empty {
        (f64::NAN, f64::NAN)
    } else {
        (
            tv_distance(&pmf, poisson, support + 60),
            tv_distance(&pmf, binom, support.max(m + 1)),
        )
    };
    Ok(SkewReport {
        attempts,
        accepted,
        counts,
        pmf,
        empty,
        lambda,
        tv_to_poisson,
        tv_to_binomial,
    })
}
