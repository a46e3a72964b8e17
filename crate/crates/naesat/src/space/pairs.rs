//! Positional support colorings and pair-overlap statistics.
//!
//! Here every clause position (i, j) is colored red or blue with respect
//! to a solution: red iff the literal in that position is the unique
//! sign-minority of its clause (its truth value differs from every other
//! position's). This positional notion depends only on the clause's sign
//! pattern, so exact product laws hold even when a clause repeats a
//! variable; it coincides with the flip-test notion of support on clauses
//! with distinct variables.

use serde::{Deserialize, Serialize};

use crate::enumerate::SolutionSet;
use crate::formula::{hamming_distance, Assignment, Formula};
use crate::params::RateParams;
use crate::{Error, Result};

/// The five per-class agreement fractions of a solution pair. A component
/// is `None` when its position class is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapVector {
    /// Agreement fraction on positions red under both solutions.
    pub a_rr: Option<f64>,
    /// Red under the first solution, blue under the second.
    pub a_rb: Option<f64>,
    /// Blue under the first solution, red under the second.
    pub a_br: Option<f64>,
    /// Blue under both.
    pub a_bb: Option<f64>,
    /// Agreement fraction on the mixed-support class Gamma.
    pub a_gamma: Option<f64>,
}

impl OverlapVector {
    /// All five components set to the same value.
    pub fn all(x: f64) -> Self {
        OverlapVector {
            a_rr: Some(x),
            a_rb: Some(x),
            a_br: Some(x),
            a_bb: Some(x),
            a_gamma: Some(x),
        }
    }
}

/// Pair statistics: the red-red position count R, the Gamma count G, the
/// overlap vector, and whether the pair's counts sit in the good-pair
/// windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairProfileStats {
    pub red_overlap: usize,
    pub gamma_count: usize,
    pub overlap: OverlapVector,
    pub good_pair: bool,
}

/// Red/blue flags per clause position: `colors[i][j]` is true iff
/// position j of clause i is red (unique sign-minority) under `sigma`.
pub fn position_colors(f: &Formula, sigma: &Assignment) -> Result<Vec<Vec<bool>>> {
    if sigma.len() != f.n {
        return Err(Error::domain("assignment length must equal n"));
    }
    let mut colors = Vec::with_capacity(f.m());
    for clause in f.clauses() {
        let vals: Vec<bool> = clause.iter().map(|l| l.value(sigma)).collect();
        let trues = vals.iter().filter(|&&v| v).count();
        let row: Vec<bool> = if trues == 1 {
            vals.clone()
        } else if trues == f.k - 1 {
            vals.iter().map(|&v| !v).collect()
        } else {
            vec![false; f.k]
        };
        colors.push(row);
    }
    Ok(colors)
}

/// Per-variable count of red positions under `sigma`.
pub fn positional_support_counts(f: &Formula, sigma: &Assignment) -> Result<Vec<usize>> {
    let colors = position_colors(f, sigma)?;
    let mut counts = vec![0usize; f.n];
    for (clause, row) in f.clauses().iter().zip(&colors) {
        for (lit, &red) in clause.iter().zip(row) {
            if red {
                counts[lit.var] += 1;
            }
        }
    }
    Ok(counts)
}

/// Number of variables occupying no red position under `sigma`.
pub fn positional_free_count(f: &Formula, sigma: &Assignment) -> Result<usize> {
    Ok(positional_support_counts(f, sigma)?
        .iter()
        .filter(|&&c| c == 0)
        .count())
}

/// Compute the pair profile statistics of two solutions.
pub fn pair_profile_stats(
    f: &Formula,
    sigma: &Assignment,
    tau: &Assignment,
    params: &RateParams,
) -> Result<PairProfileStats> {
    if !f.is_nae_solution(sigma)? || !f.is_nae_solution(tau)? {
        return Err(Error::domain("both assignments must be solutions"));
    }
    let cs = position_colors(f, sigma)?;
    let ct = position_colors(f, tau)?;
    // Agreement/total per class: [rr, rb, br, bb] then Gamma.
    let mut agree = [0usize; 4];
    let mut total = [0usize; 4];
    let mut gamma_agree = 0usize;
    let mut gamma_total = 0usize;
    for i in 0..f.m() {
        let clause_sigma_critical = cs[i].iter().any(|&r| r);
        for j in 0..f.k {
            let x = f.clause(i)[j].var;
            let same = sigma.get(x) == tau.get(x);
            let class = match (cs[i][j], ct[i][j]) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            total[class] += 1;
            if same {
                agree[class] += 1;
            }
            if class == 2 && clause_sigma_critical {
                gamma_total += 1;
                if same {
                    gamma_agree += 1;
                }
            }
        }
    }
    let frac = |a: usize, t: usize| -> Option<f64> {
        if t == 0 {
            None
        } else {
            Some(a as f64 / t as f64)
        }
    };
    let overlap = OverlapVector {
        a_rr: frac(agree[0], total[0]),
        a_rb: frac(agree[1], total[1]),
        a_br: frac(agree[2], total[2]),
        a_bb: frac(agree[3], total[3]),
        a_gamma: frac(gamma_agree, gamma_total),
    };
    let n = f.n as f64;
    let kf = params.k as f64;
    let scale = (-(kf)).exp2();
    let r_frac = total[0] as f64 / n;
    let g_frac = gamma_total as f64 / n;
    let good_pair = r_frac >= kf * scale / 3.0
        && r_frac <= 3.0 * kf * scale
        && g_frac >= kf * kf * scale / 3.0
        && g_frac <= 3.0 * kf * kf * scale;
    Ok(PairProfileStats {
        red_overlap: total[0],
        gamma_count: gamma_total,
        overlap,
        good_pair,
    })
}

/// Exact all-pairs Hamming-distance histogram with the mass in the
/// forbidden middle band (theta n, (1/2 - 2^{-k/3}) n) reported as a
/// dichotomy statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    /// counts[d] = number of unordered solution pairs at distance d.
    pub counts: Vec<u64>,
    pub total_pairs: u64,
    /// Band bounds in absolute distance (exclusive / exclusive).
    pub band_lo: f64,
    pub band_hi: f64,
    pub middle_band_mass: u64,
}

/// Exact histogram over all unordered pairs of the solution set.
pub fn pair_distance_histogram(
    solutions: &SolutionSet,
    k: u32,
    theta: f64,
) -> Result<DistanceHistogram> {
    let n = solutions.n;
    let mut counts = vec![0u64; n + 1];
    let assignments: Vec<Assignment> = solutions.assignments().collect();
    for i in 0..assignments.len() {
        for j in (i + 1)..assignments.len() {
            let d = hamming_distance(&assignments[i], &assignments[j])?;
            counts[d] += 1;
        }
    }
    let band_lo = theta * n as f64;
    let band_hi = (0.5 - (-(k as f64) / 3.0).exp2()) * n as f64;
    let middle_band_mass = counts
        .iter()
        .enumerate()
        .filter(|&(d, _)| (d as f64) > band_lo && (d as f64) < band_hi)
        .map(|(_, &c)| c)
        .sum();
    let total_pairs = counts.iter().sum();
    Ok(DistanceHistogram {
        counts,
        total_pairs,
        band_lo,
        band_hi,
        middle_band_mass,
    })
}
