//! Exhaustive solution enumeration.
//!
//! Sweeps all 2^n assignments with 64-way bit-parallel clause evaluation:
//! the low six variables are mapped to lanes of a 64-bit word, so one pass
//! over the clauses settles 64 assignments at once. Solutions are returned
//! in increasing mask order (variable 1 is the least significant bit),
//! which is the reproducible output order used by the CLI.

use serde::{Deserialize, Serialize};

use crate::formula::{beta_of_free_count, Assignment, BetaWindow, Formula};
use crate::params::RateParams;
use crate::{Error, Result};

/// Default cap on n for exhaustive enumeration (2^28 assignments).
pub const DEFAULT_ENUM_CAP: usize = 28;

/// The exact solution set of a formula, as bit masks in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub n: usize,
    solutions: Vec<u64>,
}

/// Per-solution support summary (flip-test semantics).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub mask: u64,
    pub free_count: usize,
    pub beta: f64,
    pub critical_count: usize,
}

impl SolutionSet {
    pub fn from_masks(n: usize, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        SolutionSet { n, solutions: masks }
    }

    pub fn masks(&self) -> &[u64] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.solutions.binary_search(&mask).is_ok()
    }

    pub fn assignment(&self, idx: usize) -> Assignment {
        Assignment::from_mask(self.solutions[idx], self.n)
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.solutions.iter().map(|&m| Assignment::from_mask(m, self.n))
    }

    /// Flip-test support summaries for every solution.
    pub fn summaries(&self, f: &Formula, params: &RateParams) -> Result<Vec<SolutionSummary>> {
        self.assignments()
            .zip(self.solutions.iter())
            .map(|(sigma, &mask)| {
                let p = f.support_profile(&sigma)?;
                Ok(SolutionSummary {
                    mask,
                    free_count: p.free_count(),
                    beta: beta_of_free_count(p.free_count(), params, f.n),
                    critical_count: p.critical_clauses.len(),
                })
            })
            .collect()
    }
}

/// Enumerate S(Φ) exactly, refusing when n exceeds [`DEFAULT_ENUM_CAP`].
pub fn enumerate_solutions(f: &Formula) -> Result<SolutionSet> {
    enumerate_solutions_capped(f, DEFAULT_ENUM_CAP)
}

/// Enumerate with an explicit cap on n.
pub fn enumerate_solutions_capped(f: &Formula, cap: usize) -> Result<SolutionSet> {
    if f.n > cap {
        return Err(Error::domain(format!(
            "n = {} exceeds the enumeration cap {cap}; raise the cap explicitly \
             or use sampling-based analyses",
            f.n
        )));
    }
    Ok(SolutionSet {
        n: f.n,
        solutions: sweep(f),
    })
}

/// Lane patterns: bit `a` of `LANE[v]` is the value of variable v in lane
/// assignment a, for the six lane variables.
const LANE: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn sweep(f: &Formula) -> Vec<u64> {
    let n = f.n;
    let mut out = Vec::new();
    if n <= 6 {
        // Single partial word; mask off the nonexistent lanes.
        let live = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        let ok = !violations_word(f, 0) & live;
        collect_lanes(ok, 0, &mut out);
        return out;
    }
    let blocks = 1u64 << (n - 6);
    for hi in 0..blocks {
        let base = hi << 6;
        let ok = !violations_word(f, base);
        if ok != 0 {
            collect_lanes(ok, base, &mut out);
        }
    }
    out
}

/// For the 64 assignments {base | lane}, a set bit marks a violated formula.
#[inline]
fn violations_word(f: &Formula, base: u64) -> u64 {
    let mut violated = 0u64;
    for clause in f.clauses() {
        let mut all_true = u64::MAX;
        let mut all_false = u64::MAX;
        for lit in clause {
            let bit = if lit.var < 6 {
                LANE[lit.var]
            } else if (base >> lit.var) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
            let val = if lit.positive { bit } else { !bit };
            all_true &= val;
            all_false &= !val;
        }
        violated |= all_true | all_false;
        if violated == u64::MAX {
            break;
        }
    }
    violated
}

#[inline]
fn collect_lanes(mut ok: u64, base: u64, out: &mut Vec<u64>) {
    while ok != 0 {
        let lane = ok.trailing_zeros() as u64;
        out.push(base | lane);
        ok &= ok - 1;
    }
}

/// Number of solutions whose beta lies in the half-open window.
pub fn count_beta_heavy(summaries: &[SolutionSummary], window: BetaWindow) -> usize {
    summaries.iter().filter(|s| window.contains(s.beta)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Lit;

    fn clause(lits: &[(usize, bool)]) -> Vec<Lit> {
        lits.iter().map(|&(v, p)| Lit::new(v, p)).collect()
    }

    /// Slow reference enumeration by direct clause evaluation.
    fn reference(f: &Formula) -> Vec<u64> {
        (0..(1u64 << f.n))
            .filter(|&m| {
                let sigma = Assignment::from_mask(m, f.n);
                f.is_nae_solution(&sigma).unwrap()
            })
            .collect()
    }

    #[test]
    fn empty_formula_all_solutions() {
        let f = Formula::new(3, 4, vec![]).unwrap();
        let s = enumerate_solutions(&f).unwrap();
        assert_eq!(s.len(), 16);
    }

    #[test]
    fn contradiction_no_solutions() {
        let f = Formula::new(3, 1, vec![clause(&[(0, true), (0, true), (0, true)])]).unwrap();
        let s = enumerate_solutions(&f).unwrap();
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn tautology_all_solutions() {
        let f = Formula::new(3, 2, vec![clause(&[(0, true), (1, true), (0, false)])]).unwrap();
        let s = enumerate_solutions(&f).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn matches_reference_on_random_instances() {
        for seed in 0..30u64 {
            let n = 3 + (seed as usize % 9); // up to n = 11 crosses the lane split
            let m = 2 + (seed as usize % 7);
            let f = crate::gen::sample_uniform_formula(n, m, 3, seed).unwrap();
            let s = enumerate_solutions(&f).unwrap();
            assert_eq!(s.masks(), reference(&f).as_slice(), "seed {seed}");
        }
    }

    #[test]
    fn cap_refusal() {
        let f = Formula::new(3, 30, vec![]).unwrap();
        assert!(enumerate_solutions(&f).is_err());
    }

    #[test]
    fn windows_partition_counts() {
        let f = crate::gen::sample_uniform_formula(10, 12, 3, 7).unwrap();
        let params = RateParams::from_instance(3, 10, 12).unwrap();
        let s = enumerate_solutions(&f).unwrap();
        let sums = s.summaries(&f, &params).unwrap();
        let all = count_beta_heavy(&sums, BetaWindow::everything());
        assert_eq!(all, s.len());
        let split = count_beta_heavy(&sums, BetaWindow { lo: f64::NEG_INFINITY, hi: 0.5 })
            + count_beta_heavy(&sums, BetaWindow { lo: 0.5, hi: f64::INFINITY });
        assert_eq!(split, s.len());
    }
}
