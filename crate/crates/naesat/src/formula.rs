//! Formulas, assignments, and the per-assignment structural classifiers:
//! NAE-satisfaction, the flip-test support relation, critical clauses,
//! free/blocked variables, and the heaviness statistic beta.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::params::RateParams;
use crate::{Error, Result};

/// A signed occurrence of a variable. Variables are 0-based internally;
/// the text format uses 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn new(var: usize, positive: bool) -> Self {
        Lit { var, positive }
    }

    /// Truth value of the literal under an assignment.
    #[inline]
    pub fn value(&self, sigma: &Assignment) -> bool {
        sigma.values[self.var] == self.positive
    }
}

/// A k-NAE-CNF formula: `m` clauses of exactly `k` literals over `n`
/// variables. Repeated variables inside a clause are permitted — the
/// sampling space is all (2n)^k clauses — so tautological clauses
/// (x and ¬x together) are legal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formula {
    pub k: usize,
    pub n: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Formula {
    pub fn new(k: usize, n: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        if k < 3 {
            return Err(Error::domain(format!("clause width k must be >= 3, got {k}")));
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.len() != k {
                return Err(Error::domain(format!(
                    "clause {i} has {} literals, expected {k}",
                    c.len()
                )));
            }
            for lit in c {
                if lit.var >= n {
                    return Err(Error::domain(format!(
                        "clause {i} references variable {} out of range (n = {n})",
                        lit.var + 1
                    )));
                }
            }
        }
        Ok(Formula { k, n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn clause(&self, i: usize) -> &[Lit] {
        &self.clauses[i]
    }

    /// Total number of occurrences of each variable (the degree sequence of
    /// the instance, counting multiplicity within clauses).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for c in &self.clauses {
            for lit in c {
                d[lit.var] += 1;
            }
        }
        d
    }

    /// True iff every clause has at least one true and one false literal.
    pub fn is_nae_solution(&self, sigma: &Assignment) -> Result<bool> {
        self.check_len(sigma)?;
        Ok(self
            .clauses
            .iter()
            .all(|c| !Self::clause_monochromatic(c, sigma)))
    }

    fn check_len(&self, sigma: &Assignment) -> Result<()> {
        if sigma.len() != self.n {
            return Err(Error::domain(format!(
                "assignment length {} does not match n = {}",
                sigma.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// A clause is violated iff all its literal values coincide.
    #[inline]
    fn clause_monochromatic(clause: &[Lit], sigma: &Assignment) -> bool {
        let first = clause[0].value(sigma);
        clause.iter().all(|l| l.value(sigma) == first)
    }

    /// The variable whose flip (of all its occurrences) violates clause
    /// `clause_index`, if one exists. This is the canonical *flip test*:
    /// it handles clauses with repeated variables unambiguously. For
    /// clauses over k distinct variables it coincides with the
    /// minority-literal characterization.
    ///
    /// Requires `sigma` to be an NAE-solution.
    pub fn supporting_variable(
        &self,
        sigma: &Assignment,
        clause_index: usize,
    ) -> Result<Option<usize>> {
        if clause_index >= self.m() {
            return Err(Error::domain(format!(
                "clause index {clause_index} out of range (m = {})",
                self.m()
            )));
        }
        if !self.is_nae_solution(sigma)? {
            return Err(Error::domain("assignment is not an NAE-solution"));
        }
        Ok(self.supporting_variables_of_clause(sigma, clause_index).into_iter().next())
    }

    /// All variables supporting a clause under `sigma` (no solution check;
    /// callers validate). With repeated variables a clause can be supported
    /// by up to two variables; with distinct variables by at most one.
    pub(crate) fn supporting_variables_of_clause(
        &self,
        sigma: &Assignment,
        clause_index: usize,
    ) -> Vec<usize> {
        let clause = &self.clauses[clause_index];
        let vars: BTreeSet<usize> = clause.iter().map(|l| l.var).collect();
        let mut out = Vec::new();
        for &x in &vars {
            // Flip x: every literal on x toggles its value.
            let first_val = {
                let l = clause[0];
                l.value(sigma) ^ (l.var == x)
            };
            let mono = clause
                .iter()
                .all(|l| (l.value(sigma) ^ (l.var == x)) == first_val);
            if mono {
                out.push(x);
            }
        }
        out
    }

    /// Full support classification of a solution.
    pub fn support_profile(&self, sigma: &Assignment) -> Result<SupportProfile> {
        if !self.is_nae_solution(sigma)? {
            return Err(Error::domain("assignment is not an NAE-solution"));
        }
        let mut support_counts = vec![0usize; self.n];
        let mut critical_clauses = Vec::new();
        let mut supported_occurrences = vec![0usize; self.n];
        for i in 0..self.m() {
            let supp = self.supporting_variables_of_clause(sigma, i);
            if !supp.is_empty() {
                critical_clauses.push(i);
            }
            for &x in &supp {
                support_counts[x] += 1;
                supported_occurrences[x] += 1;
            }
        }
        let degrees = self.degrees();
        let other_occurrences: Vec<usize> = (0..self.n)
            .map(|x| degrees[x] - supported_occurrences[x].min(degrees[x]))
            .collect();
        let (mut free_vars, mut blocked_vars) = (Vec::new(), Vec::new());
        for x in 0..self.n {
            if support_counts[x] > 0 {
                blocked_vars.push(x);
            } else {
                free_vars.push(x);
            }
        }
        Ok(SupportProfile {
            support_counts,
            other_occurrences,
            critical_clauses,
            free_vars,
            blocked_vars,
        })
    }
}

/// An assignment of binary values to the n variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all_true(n: usize) -> Self {
        Assignment { values: vec![true; n] }
    }

    /// Decode the low `n` bits of a mask (bit i = value of variable i).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment {
            values: (0..n).map(|i| (mask >> i) & 1 == 1).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.values.len() <= 64, "mask form limited to n <= 64");
        self.values
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &v)| m | ((v as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, var: usize) -> bool {
        self.values[var]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// The inverse assignment x ↦ 1 − σ(x).
    pub fn invert(&self) -> Assignment {
        Assignment {
            values: self.values.iter().map(|v| !v).collect(),
        }
    }
}

/// Hamming distance between two equal-length assignments.
pub fn hamming_distance(a: &Assignment, b: &Assignment) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::domain("assignment length mismatch"));
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .filter(|(x, y)| x != y)
        .count())
}

/// Support classification of a solution: per-variable support counts s_x,
/// remaining (non-supporting) occurrence counts d'_x, the set of critical
/// clauses, and the free/blocked partition of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportProfile {
    /// s_x: number of clauses supported by x.
    pub support_counts: Vec<usize>,
    /// d'_x: occurrences of x (with multiplicity) not accounted to support,
    /// so that total degree d_x = supported occurrences + d'_x.
    pub other_occurrences: Vec<usize>,
    pub critical_clauses: Vec<usize>,
    pub free_vars: Vec<usize>,
    pub blocked_vars: Vec<usize>,
}

impl SupportProfile {
    pub fn free_count(&self) -> usize {
        self.free_vars.len()
    }
}

/// beta = 1 − |free| / (e^{-lambda} n): a solution is "beta-heavy" when its
/// free-variable count equals (1−beta) e^{-lambda} n.
pub fn beta_of(profile: &SupportProfile, params: &RateParams, n: usize) -> f64 {
    beta_of_free_count(profile.free_count(), params, n)
}

/// Same as [`beta_of`] but from a raw free-variable count.
pub fn beta_of_free_count(free: usize, params: &RateParams, n: usize) -> f64 {
    assert!(n > 0, "n must be positive");
    1.0 - free as f64 / params.free_scale(n)
}

/// Half-open beta window [lo, hi) used for Z_beta counting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaWindow {
    pub lo: f64,
    pub hi: f64,
}

impl BetaWindow {
    pub fn contains(&self, beta: f64) -> bool {
        self.lo <= beta && beta < self.hi
    }

    pub fn everything() -> Self {
        BetaWindow {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }
}

/// Serialize a formula in the text format:
/// `p naecnf <n> <m> <k>` followed by one 0-terminated clause per line of
/// k signed 1-based variable indices.
pub fn to_naecnf(f: &Formula) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p naecnf {} {} {}", f.n, f.m(), f.k);
    for c in f.clauses() {
        for lit in c {
            let signed = (lit.var as i64 + 1) * if lit.positive { 1 } else { -1 };
            let _ = write!(s, "{signed} ");
        }
        let _ = writeln!(s, "0");
    }
    s
}

/// Parse the text format. Rejects wrong clause arity, missing terminators,
/// and out-of-range indices. Lines starting with `c` are comments.
pub fn parse_naecnf(input: &str) -> Result<Formula> {
    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('c'));
    let header = lines
        .next()
        .ok_or_else(|| Error::parse("empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "p" || toks[1] != "naecnf" {
        return Err(Error::parse(format!("bad header line: {header:?}")));
    }
    let n: usize = toks[2]
        .parse()
        .map_err(|_| Error::parse("bad n in header"))?;
    let m: usize = toks[3]
        .parse()
        .map_err(|_| Error::parse("bad m in header"))?;
    let k: usize = toks[4]
        .parse()
        .map_err(|_| Error::parse("bad k in header"))?;
    let mut clauses = Vec::with_capacity(m);
    for line in lines {
        let mut lits = Vec::with_capacity(k);
        let mut terminated = false;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(format!("bad literal token {tok:?}")))?;
            if v == 0 {
                terminated = true;
                break;
            }
            let var = v.unsigned_abs() as usize;
            if var == 0 || var > n {
                return Err(Error::parse(format!("variable {v} out of range 1..={n}")));
            }
            lits.push(Lit::new(var - 1, v > 0));
        }
        if !terminated {
            return Err(Error::parse(format!("clause line missing 0 terminator: {line:?}")));
        }
        if lits.len() != k {
            return Err(Error::parse(format!(
                "clause has {} literals, expected {k}: {line:?}",
                lits.len()
            )));
        }
        clauses.push(lits);
    }
    if clauses.len() != m {
        return Err(Error::parse(format!(
            "expected {m} clauses, found {}",
            clauses.len()
        )));
    }
    Formula::new(k, n, clauses)
}
