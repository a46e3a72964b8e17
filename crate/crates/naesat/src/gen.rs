//! Random instance generation: uniform formulas, Poissonian degree
//! sequences, and degree-conditioned formulas via the configuration
//! (balls-to-positions) model, plus the degree statistics used to sanity
//! check sampled sequences.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::formula::{Formula, Lit};
use crate::params::RateParams;
use crate::rng::master_rng;
use crate::{Error, Result};

/// Per-variable degree sequence d = (d_x). Built to satisfy sum d_x = k m
/// when used with the configuration model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// A fixed outcome of the configuration model: a bijection from balls
/// (variable copies, listed variable-major) to the k·m clause positions,
/// plus a sign per position.
///
/// `pi[b]` is the position index (clause i, slot j) = i·k + j of ball `b`;
/// balls are ordered x1's copies first, then x2's, and so on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationDraw {
    pub pi: Vec<usize>,
    pub signs: Vec<bool>,
}

/// Uniform formula: every one of the m·k literals is an independent
/// uniform draw from the 2n literals.
pub fn sample_uniform_formula(n: usize, m: usize, k: usize, seed: u64) -> Result<Formula> {
    sample_uniform_formula_with(n, m, k, &mut master_rng(seed))
}

/// As [`sample_uniform_formula`] but drawing from a caller-provided RNG
/// (e.g. a per-trial stream).
pub fn sample_uniform_formula_with<R: Rng>(
    n: usize,
    m: usize,
    k: usize,
    rng: &mut R,
) -> Result<Formula> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    if k < 3 {
        return Err(Error::domain("k must be >= 3"));
    }
    let clauses = (0..m)
        .map(|_| {
            (0..k)
                .map(|_| Lit::new(rng.gen_range(0..n), rng.gen_bool(0.5)))
                .collect()
        })
        .collect();
    Formula::new(k, n, clauses)
}

/// Degree sequence distributed as n i.i.d. Poisson(kr) variables
/// conditioned on total k·m — realized exactly as a multinomial allocation
/// of k·m balls into n equiprobable bins, sampled by sequential binomial
/// splits (exact, O(n) draws).
pub fn sample_degree_sequence(n: usize, m: usize, k: usize, seed: u64) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let mut rng = master_rng(seed);
    let mut degrees = Vec::with_capacity(n);
    let mut remaining = (k * m) as u64;
    for i in 0..n {
        let bins_left = (n - i) as u64;
        if bins_left == 1 {
            degrees.push(remaining as usize);
            remaining = 0;
        } else {
            let d = Binomial::new(remaining, 1.0 / bins_left as f64)
                .map_err(|e| Error::domain(format!("binomial split failed: {e}")))?
                .sample(&mut rng);
            degrees.push(d as usize);
            remaining -= d;
        }
    }
    Ok(DegreeSequence { degrees })
}

/// Build the formula Φ(π, s) determined by a configuration draw.
pub fn formula_from_configuration(
    degseq: &DegreeSequence,
    m: usize,
    k: usize,
    draw: &ConfigurationDraw,
) -> Result<Formula> {
    let total = degseq.total();
    if total != k * m {
        return Err(Error::domain(format!(
            "degree sum {total} does not equal k*m = {}",
            k * m
        )));
    }
    if draw.pi.len() != total || draw.signs.len() != total {
        return Err(Error::domain("configuration draw has wrong size"));
    }
    let n = degseq.degrees.len();
    // Ball b belongs to the variable whose copy range contains b.
    let mut ball_var = Vec::with_capacity(total);
    for (x, &d) in degseq.degrees.iter().enumerate() {
        ball_var.extend(std::iter::repeat(x).take(d));
    }
    let mut slots: Vec<Option<Lit>> = vec![None; total];
    for (b, &pos) in draw.pi.iter().enumerate() {
        if pos >= total || slots[pos].is_some() {
            return Err(Error::domain("pi is not a bijection onto the positions"));
        }
        slots[pos] = Some(Lit::new(ball_var[b], draw.signs[pos]));
    }
    let clauses = (0..m)
        .map(|i| {
            (0..k)
                .map(|j| slots[i * k + j].expect("bijection covers all positions"))
                .collect()
        })
        .collect();
    Formula::new(k, n, clauses)
}

/// Degree-conditioned formula Φ_d: a uniform bijection of balls to
/// positions plus independent uniform signs. Every formula with degree
/// sequence d arises from exactly Π_x d_x! of the (π, s) pairs.
pub fn sample_configuration_formula(
    degseq: &DegreeSequence,
    m: usize,
    k: usize,
    seed: u64,
) -> Result<Formula> {
    let total = degseq.total();
    if total != k * m {
        return Err(Error::domain(format!(
            "degree sum {total} does not equal k*m = {}",
            k * m
        )));
    }
    let mut rng = master_rng(seed);
    // Uniform bijection by Fisher–Yates on the position list.
    let mut positions: Vec<usize> = (0..total).collect();
    for i in (1..total).rev() {
        positions.swap(i, rng.gen_range(0..=i));
    }
    let signs = (0..total).map(|_| rng.gen_bool(0.5)).collect();
    formula_from_configuration(degseq, m, k, &ConfigurationDraw { pi: positions, signs })
}

/// Summary statistics of a degree sequence with the tail bounds that
/// random sequences satisfy with high probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    /// counts[i] = number of variables of degree i.
    pub counts: Vec<usize>,
    /// |{x : |d_x − kr| ≥ α √(kr)}|.
    pub tail_count: usize,
    /// Σ d_x over the tail set.
    pub tail_volume: usize,
    pub max_degree: usize,
    pub sum_squares: u128,
    /// tail_count ≤ 2 e^{−α²/2} n.
    pub tail_count_ok: bool,
    /// tail_volume ≤ 2 e^{−α²/2} (kr)² n.
    pub tail_volume_ok: bool,
    /// Σ d_x² ≤ 10 (kr)² n.
    pub sum_squares_ok: bool,
}

pub fn degree_sequence_stats(
    degseq: &DegreeSequence,
    params: &RateParams,
    alpha: f64,
) -> DegreeStats {
    let n = degseq.degrees.len();
    let kr = params.k as f64 * params.r;
    let max_degree = degseq.degrees.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; max_degree + 1];
    for &d in &degseq.degrees {
        counts[d] += 1;
    }
    let thresh = alpha * kr.sqrt();
    let (mut tail_count, mut tail_volume) = (0usize, 0usize);
    let mut sum_squares: u128 = 0;
    for &d in &degseq.degrees {
        sum_squares += (d as u128) * (d as u128);
        if (d as f64 - kr).abs() >= thresh {
            tail_count += 1;
            tail_volume += d;
        }
    }
    let scale = 2.0 * (-alpha * alpha / 2.0).exp();
    DegreeStats {
        counts,
        tail_count,
        tail_volume,
        max_degree,
        sum_squares,
        tail_count_ok: (tail_count as f64) <= scale * n as f64,
        tail_volume_ok: (tail_volume as f64) <= scale * kr * kr * n as f64,
        sum_squares_ok: (sum_squares as f64) <= 10.0 * kr * kr * n as f64,
    }
}

/// Result of the worst-case volume bound Vol(S) ≤ 10 max{kr|S|, |S| ln(n/|S|)}
/// over all set sizes, checked on the s highest-degree variables (the
/// maximizer of Vol among size-s sets).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeTailCheck {
    pub holds: bool,
    /// Smallest violating set size, if any.
    pub first_violation: Option<usize>,
}

pub fn volume_tail_check(degseq: &DegreeSequence, params: &RateParams) -> VolumeTailCheck {
    let n = degseq.degrees.len();
    let kr = params.k as f64 * params.r;
    let mut sorted = degseq.degrees.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut vol = 0usize;
    for (idx, &d) in sorted.iter().enumerate() {
        vol += d;
        let s = (idx + 1) as f64;
        let bound = 10.0 * (kr * s).max(s * (n as f64 / s).ln());
        if vol as f64 > bound {
            return VolumeTailCheck {
                holds: false,
                first_violation: Some(idx + 1),
            };
        }
    }
    VolumeTailCheck {
        holds: true,
        first_violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_formula_shape_and_determinism() {
        let f = sample_uniform_formula(10, 25, 4, 42).unwrap();
        assert_eq!(f.n, 10);
        assert_eq!(f.m(), 25);
        assert_eq!(f.k, 4);
        let g = sample_uniform_formula(10, 25, 4, 42).unwrap();
        assert_eq!(f, g);
        let h = sample_uniform_formula(10, 25, 4, 43).unwrap();
        assert_ne!(f, h);
    }

    #[test]
    fn single_variable_formula_signs_uniform() {
        // n=1, k=3, m=1: all 8 sign patterns should appear with freq ~1/8.
        let mut counts = [0usize; 8];
        for seed in 0..4000u64 {
            let f = sample_uniform_formula(1, 1, 3, seed).unwrap();
            let idx = f.clause(0).iter().enumerate().fold(0usize, |a, (i, l)| {
                a | ((l.positive as usize) << i)
            });
            counts[idx] += 1;
        }
        // 4 sigma of Bin(4000, 1/8): mean 500, sd ~ 20.9.
        for &c in &counts {
            assert!((c as f64 - 500.0).abs() < 4.0 * 20.92, "count {c}");
        }
    }

    #[test]
    fn degree_sequence_totals() {
        for seed in 0..20 {
            let d = sample_degree_sequence(17, 40, 5, seed).unwrap();
            assert_eq!(d.total(), 200);
        }
    }

    #[test]
    fn degree_pair_split_one_to_two_to_one() {
        // n=2, km=2: (2,0):(1,1):(0,2) should be 1:2:1.
        let mut counts = [0usize; 3];
        let trials = 8000;
        for seed in 0..trials {
            let d = sample_degree_sequence(2, 1, 2, seed);
            // k=2 is below the formula floor but fine for the split itself:
            // build by hand instead.
            let d = match d {
                Ok(d) => d,
                Err(_) => unreachable!(),
            };
            counts[d.degrees[0]] += 1;
        }
        let t = trials as f64;
        // 4 sigma of Bin(trials, 1/4) and Bin(trials, 1/2).
        assert!((counts[0] as f64 - t / 4.0).abs() < 4.0 * (t * 3.0 / 16.0).sqrt());
        assert!((counts[2] as f64 - t / 4.0).abs() < 4.0 * (t * 3.0 / 16.0).sqrt());
        assert!((counts[1] as f64 - t / 2.0).abs() < 4.0 * (t / 4.0).sqrt());
    }

    #[test]
    fn configuration_respects_degrees() {
        let d = sample_degree_sequence(9, 12, 3, 5).unwrap();
        let f = sample_configuration_formula(&d, 12, 3, 99).unwrap();
        assert_eq!(f.degrees(), d.degrees);
    }

    #[test]
    fn configuration_single_variable() {
        let d = DegreeSequence { degrees: vec![3] };
        let f = sample_configuration_formula(&d, 1, 3, 1).unwrap();
        assert!(f.clause(0).iter().all(|l| l.var == 0));
    }

    #[test]
    fn configuration_rejects_bad_total() {
        let d = DegreeSequence { degrees: vec![2, 2] };
        assert!(sample_configuration_formula(&d, 2, 3, 1).is_err());
    }

    #[test]
    fn stats_constant_sequence() {
        let params = RateParams::new(4, 2.5).unwrap(); // kr = 10
        let d = DegreeSequence { degrees: vec![10; 50] };
        let s = degree_sequence_stats(&d, &params, 0.5);
        assert_eq!(s.tail_count, 0);
        assert_eq!(s.tail_volume, 0);
        assert!(s.tail_count_ok && s.tail_volume_ok && s.sum_squares_ok);
        assert_eq!(s.counts[10], 50);
        let vc = volume_tail_check(&d, &params);
        assert!(vc.holds);
    }

    #[test]
    fn stats_totals() {
        let params = RateParams::new(5, 10.0).unwrap();
        let d = sample_degree_sequence(100, 200, 5, 3).unwrap();
        let s = degree_sequence_stats(&d, &params, 1.0);
        let total: usize = s.counts.iter().enumerate().map(|(i, &c)| i * c).sum();
        assert_eq!(total, 1000);
        let nvars: usize = s.counts.iter().sum();
        assert_eq!(nvars, 100);
    }

    #[test]
    fn volume_check_flags_extreme_degree() {
        // One variable holds every ball: Vol of the singleton is km,
        // far above 10*max(kr, ln n) for small kr.
        let params = RateParams::new(3, 0.5).unwrap();
        let mut degrees = vec![0usize; 100];
        degrees[0] = 10_000;
        let d = DegreeSequence { degrees };
        let vc = volume_tail_check(&d, &params);
        assert!(!vc.holds);
        assert_eq!(vc.first_violation, Some(1));
    }
}
