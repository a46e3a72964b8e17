//! Rigid variables, self-contained cores, dense sets, and the composite
//! beta-goodness predicate.
//!
//! All support notions here are positional (unique sign-minority; see
//! [`crate::space::pairs`]): a variable supports a clause when it occupies
//! a red position of it.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{enumerate_solutions, SolutionSet};
use crate::formula::{beta_of_free_count, Assignment, Formula};
use crate::params::RateParams;
use crate::rng::master_rng;
use crate::space::pairs::position_colors;
use crate::{Error, Result};

/// Exact rigidity sets of a solution within an enumerated solution set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidSets {
    /// Variables x such that every solution disagreeing with sigma on x
    /// lies at Hamming distance >= xi n.
    pub xi_rigid: BTreeSet<usize>,
    /// Variables constant on the ball cluster of sigma (radius
    /// max(1, ceil(theta n))).
    pub cluster_rigid: BTreeSet<usize>,
}

/// Compute both rigidity sets for `sigma` (given by its mask) at level
/// `xi` and ball radius fraction `theta`.
pub fn rigid_variables(
    solutions: &SolutionSet,
    sigma_mask: u64,
    xi: f64,
    theta: f64,
) -> Result<RigidSets> {
    if !solutions.contains(sigma_mask) {
        return Err(Error::domain("sigma is not in the solution set"));
    }
    let n = solutions.n;
    let threshold = xi * n as f64;
    let radius = ((theta * n as f64).ceil() as usize).max(1);
    let mut xi_rigid: BTreeSet<usize> = (0..n).collect();
    let mut cluster_rigid: BTreeSet<usize> = (0..n).collect();
    for &tau in solutions.masks() {
        let diff = sigma_mask ^ tau;
        let d = diff.count_ones() as usize;
        if (d as f64) < threshold - 1e-9 {
            for x in 0..n {
                if diff >> x & 1 == 1 {
                    xi_rigid.remove(&x);
                }
            }
        }
        if d <= radius {
            for x in 0..n {
                if diff >> x & 1 == 1 {
                    cluster_rigid.remove(&x);
                }
            }
        }
    }
    Ok(RigidSets {
        xi_rigid,
        cluster_rigid,
    })
}

/// For each clause, the set of variables occupying a red position of it.
fn supporters_per_clause(f: &Formula, sigma: &Assignment) -> Result<Vec<BTreeSet<usize>>> {
    let colors = position_colors(f, sigma)?;
    Ok(f.clauses()
        .iter()
        .zip(&colors)
        .map(|(clause, row)| {
            clause
                .iter()
                .zip(row)
                .filter(|(_, &red)| red)
                .map(|(lit, _)| lit.var)
                .collect()
        })
        .collect())
}

/// Output of the self-contained-core peeling process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreResult {
    /// The peeled core R.
    pub r_set: BTreeSet<usize>,
    /// Variables supporting some clause whose other k-1 variables all lie
    /// in R.
    pub attached: BTreeSet<usize>,
    /// The special clause reserved for each supporting variable.
    pub special_clauses: BTreeMap<usize, usize>,
}

/// Run the peeling process: reserve a random special clause per
/// supporting variable, start from variables supporting at least 4
/// clauses, and repeatedly delete any core variable that supports fewer
/// than 2 non-special clauses made up entirely of core variables.
pub fn self_contained_core(f: &Formula, sigma: &Assignment, seed: u64) -> Result<CoreResult> {
    if !f.is_nae_solution(sigma)? {
        return Err(Error::domain("sigma must be a solution"));
    }
    let supporters = supporters_per_clause(f, sigma)?;
    let mut clauses_of: Vec<Vec<usize>> = vec![Vec::new(); f.n];
    for (i, supp) in supporters.iter().enumerate() {
        for &x in supp {
            clauses_of[x].push(i);
        }
    }
    let mut rng = master_rng(seed);
    let mut special_clauses = BTreeMap::new();
    for (x, cls) in clauses_of.iter().enumerate() {
        if !cls.is_empty() {
            special_clauses.insert(x, cls[rng.gen_range(0..cls.len())]);
        }
    }
    let mut r_set: BTreeSet<usize> = (0..f.n).filter(|&x| clauses_of[x].len() >= 4).collect();
    // A clause counts for x if it is not x's special clause and every one
    // of its variables lies in the current core.
    let count_for = |x: usize, r: &BTreeSet<usize>| -> usize {
        clauses_of[x]
            .iter()
            .filter(|&&i| Some(&i) != special_clauses.get(&x))
            .filter(|&&i| f.clause(i).iter().all(|lit| r.contains(&lit.var)))
            .count()
    };
    loop {
        let doomed: Vec<usize> = r_set
            .iter()
            .copied()
            .filter(|&x| count_for(x, &r_set) < 2)
            .collect();
        if doomed.is_empty() {
            break;
        }
        for x in doomed {
            r_set.remove(&x);
        }
    }
    for &x in &r_set {
        if count_for(x, &r_set) < 2 {
            return Err(Error::domain(
                "peeling invariant violated: core variable under-supported",
            ));
        }
    }
    let attached: BTreeSet<usize> = (0..f.n)
        .filter(|&x| {
            clauses_of[x].iter().any(|&i| {
                f.clause(i)
                    .iter()
                    .all(|lit| lit.var == x || r_set.contains(&lit.var))
            })
        })
        .collect();
    Ok(CoreResult {
        r_set,
        attached,
        special_clauses,
    })
}

/// True iff every variable of `subset` supports at least two clauses that
/// each contain another variable of `subset`.
pub fn dense_check(f: &Formula, sigma: &Assignment, subset: &BTreeSet<usize>) -> Result<bool> {
    let supporters = supporters_per_clause(f, sigma)?;
    for &x in subset {
        let good = supporters
            .iter()
            .enumerate()
            .filter(|(i, supp)| {
                supp.contains(&x)
                    && f.clause(*i)
                        .iter()
                        .any(|lit| lit.var != x && subset.contains(&lit.var))
            })
            .count();
        if good < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Condition-by-condition evaluation of the beta-goodness predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaGoodBreakdown {
    pub beta: f64,
    pub critical_count: usize,
    pub lambda_n_rounded: usize,
    /// Critical-clause count equals round(lambda n).
    pub condition1: bool,
    pub max_support: usize,
    /// No variable supports more than 3k clauses.
    pub condition2: bool,
    /// Per-n log of the number of solutions within distance
    /// (1/2 - 2^{-k/3}) n of sigma.
    pub ball_log: f64,
    /// The allowed bound (1 - beta) e^{-lambda} ln2 + slack.
    pub ball_bound: f64,
    pub condition3: bool,
    pub good: bool,
    pub reasons: Vec<String>,
}

/// Evaluate the three goodness conditions for `sigma`, with `good_slack`
/// the per-n slack added to the cluster-size bound of condition 3 (the
/// default used by the CLI is k^13 4^{-k}).
pub fn is_beta_good(
    f: &Formula,
    sigma: &Assignment,
    params: &RateParams,
    good_slack: f64,
) -> Result<BetaGoodBreakdown> {
    if !f.is_nae_solution(sigma)? {
        return Err(Error::domain("sigma must be a solution"));
    }
    let colors = position_colors(f, sigma)?;
    let critical_count = colors.iter().filter(|row| row.iter().any(|&r| r)).count();
    let mut support = vec![0usize; f.n];
    for (clause, row) in f.clauses().iter().zip(&colors) {
        for (lit, &red) in clause.iter().zip(row) {
            if red {
                support[lit.var] += 1;
            }
        }
    }
    let free = support.iter().filter(|&&s| s == 0).count();
    let beta = beta_of_free_count(free, params, f.n);
    let lambda_n_rounded = (params.lambda * f.n as f64).round() as usize;
    let condition1 = critical_count == lambda_n_rounded;
    let max_support = support.iter().copied().max().unwrap_or(0);
    let condition2 = max_support <= 3 * params.k as usize;
    let radius = (0.5 - (-(params.k as f64) / 3.0).exp2()) * f.n as f64;
    let solutions = enumerate_solutions(f)?;
    let sigma_mask = sigma.to_mask();
    let ball = solutions
        .masks()
        .iter()
        .filter(|&&t| ((sigma_mask ^ t).count_ones() as f64) <= radius)
        .count();
    let ball_log = (ball as f64).ln() / f.n as f64;
    let ball_bound = (1.0 - beta) * params.exp_neg_lambda() * std::f64::consts::LN_2 + good_slack;
    let condition3 = ball_log <= ball_bound;
    let mut reasons = Vec::new();
    if !condition1 {
        reasons.push(format!(
            "condition 1: critical count {critical_count} != round(lambda n) = {lambda_n_rounded}"
        ));
    }
    if !condition2 {
        reasons.push(format!(
            "condition 2: max support {max_support} exceeds 3k = {}",
            3 * params.k
        ));
    }
    if !condition3 {
        reasons.push(format!(
            "condition 3: per-n ball log {ball_log} exceeds bound {ball_bound}"
        ));
    }
    Ok(BetaGoodBreakdown {
        beta,
        critical_count,
        lambda_n_rounded,
        condition1,
        max_support,
        condition2,
        ball_log,
        ball_bound,
        condition3,
        good: condition1 && condition2 && condition3,
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Lit;
    use crate::gen::sample_uniform_formula;

    #[test]
    fn singleton_solution_set_is_fully_rigid() {
        let sols = SolutionSet::from_masks(4, vec![0b1010]);
        let r = rigid_variables(&sols, 0b1010, 1.0, 0.01).unwrap();
        assert_eq!(r.xi_rigid.len(), 4);
        assert_eq!(r.cluster_rigid.len(), 4);
    }

    #[test]
    fn antipodal_pair_rigidity_threshold() {
        // S = {00, 11}: any flip forces distance 2, so both variables are
        // rigid whenever xi n <= 2 and none are rigid beyond.
        let sols = SolutionSet::from_masks(2, vec![0b00, 0b11]);
        let at = |xi: f64| rigid_variables(&sols, 0, xi, 0.01).unwrap().xi_rigid.len();
        assert_eq!(at(0.5), 2);
        assert_eq!(at(1.0), 2);
        assert_eq!(at(1.2), 0);
    }

    #[test]
    fn rigid_set_shrinks_as_xi_grows() {
        let f = sample_uniform_formula(12, 25, 4, 3).unwrap();
        let sols = enumerate_solutions(&f).unwrap();
        if sols.is_empty() {
            return;
        }
        let sigma = sols.masks()[0];
        let mut prev: Option<BTreeSet<usize>> = None;
        for step in 1..=10 {
            let cur = rigid_variables(&sols, sigma, step as f64 / 10.0, 0.01)
                .unwrap()
                .xi_rigid;
            if let Some(p) = prev {
                assert!(cur.is_subset(&p));
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn empty_formula_has_empty_core() {
        let f = Formula::new(3, 5, Vec::new()).unwrap();
        let core = self_contained_core(&f, &Assignment::all_true(5), 1).unwrap();
        assert!(core.r_set.is_empty());
        assert!(core.attached.is_empty());
    }

    #[test]
    fn sparse_support_yields_empty_core() {
        // One clause only: no variable supports >= 4 clauses.
        let f = Formula::new(
            3,
            3,
            vec![vec![Lit::new(0, true), Lit::new(1, true), Lit::new(2, false)]],
        )
        .unwrap();
        let core = self_contained_core(&f, &Assignment::all_true(3), 1).unwrap();
        assert!(core.r_set.is_empty());
    }

    #[test]
    fn dense_check_vacuous_and_singleton() {
        let f = sample_uniform_formula(8, 10, 4, 5).unwrap();
        let sols = enumerate_solutions(&f).unwrap();
        if sols.is_empty() {
            return;
        }
        let sigma = sols.assignment(0);
        assert!(dense_check(&f, &sigma, &BTreeSet::new()).unwrap());
        // A variable supporting no clause can never be dense.
        let support = crate::space::pairs::positional_support_counts(&f, &sigma).unwrap();
        if let Some(x) = support.iter().position(|&s| s == 0) {
            let mut set = BTreeSet::new();
            set.insert(x);
            assert!(!dense_check(&f, &sigma, &set).unwrap());
        }
    }

    #[test]
    fn goodness_reports_condition_failures() {
        let f = sample_uniform_formula(12, 20, 4, 9).unwrap();
        let params = RateParams::from_instance(4, 12, 20).unwrap();
        let sols = enumerate_solutions(&f).unwrap();
        if sols.is_empty() {
            return;
        }
        let sigma = sols.assignment(0);
        let b = is_beta_good(&f, &sigma, &params, 1.0).unwrap();
        assert_eq!(b.good, b.condition1 && b.condition2 && b.condition3);
        assert_eq!(
            b.reasons.is_empty(),
            b.condition1 && b.condition2 && b.condition3
        );
    }
}
