//! Command-line front end: reproducible, machine-readable access to the
//! generators, solution-space analysis, rate functions, and occupancy
//! solvers.
//!
//! Exit codes: 0 success, 1 I/O error, 2 domain error, 64 usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::enumerate::{enumerate_solutions_capped, SolutionSummary, DEFAULT_ENUM_CAP};
use crate::formula::{parse_naecnf, to_naecnf, Assignment, BetaWindow};
use crate::gen::{
    degree_sequence_stats, sample_degree_sequence, sample_uniform_formula,
    sample_uniform_formula_with, volume_tail_check,
};
use crate::occupancy::{
    capacitated_conditioned_prob, capacitated_throw_mc, empty_bins_exact, Capacity,
    OccupancyModel,
};
use crate::params::RateParams;
use crate::rate::psi::{psi_breakdown, ProfileFractions};
use crate::rate::{
    beta_exponents, dropped_terms, first_moment_exponent, llt::Pgf, pair_exponent, thresholds,
};
use crate::report::RunRecord;
use crate::rng::trial_rng;
use crate::space::clusters::{beta_ball_count, cluster_decomposition, sp_sample};
use crate::space::pairs::{pair_distance_histogram, pair_profile_stats, OverlapVector};
use crate::space::structures::rigid_variables;
use crate::{Error, Formula, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "naesat", version, about = "random k-NAESAT solution-space laboratory")]
struct Cli {
    /// Output format (scans support csv; everything else is json).
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for Monte Carlo runs (default: NAESAT_LAB_THREADS or
    /// all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a uniform random formula and print it in naecnf format.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a degree sequence and report its tail statistics.
    Degseq {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Deviation threshold (in sqrt(kr) units) for the tail counts.
        #[arg(long, default_value_t = 3.0)]
        alpha: f64,
    },
    /// Count solutions of a formula file exactly.
    Count {
        #[arg(long, value_name = "FILE")]
        r#in: PathBuf,
        /// Density override for beta (default: m/n).
        #[arg(long)]
        r: Option<f64>,
    },
    /// Cluster decomposition of the solution set.
    Clusters {
        #[arg(long, value_name = "FILE")]
        r#in: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        theta: f64,
        #[arg(long)]
        r: Option<f64>,
        /// Optional beta window [lo, hi) restricting the ball count.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Exact rigid-variable sets of a solution.
    Rigidity {
        #[arg(long, value_name = "FILE")]
        r#in: PathBuf,
        /// Rigidity level (fraction of n).
        #[arg(long, default_value_t = 0.2)]
        xi: f64,
        #[arg(long, default_value_t = 0.01)]
        theta: f64,
        /// Solution mask (default: lexicographically first solution).
        #[arg(long)]
        sigma: Option<u64>,
    },
    /// Pair-distance histogram, or single-pair overlap statistics.
    Pairs {
        #[arg(long, value_name = "FILE")]
        r#in: PathBuf,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        theta: f64,
        /// With --sigma and --tau: overlap statistics of that single pair.
        #[arg(long)]
        sigma: Option<u64>,
        #[arg(long)]
        tau: Option<u64>,
    },
    /// Sample solutions cluster-uniformly (uniform cluster, then uniform
    /// member).
    SpSample {
        #[arg(long, value_name = "FILE")]
        r#in: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
    /// All density landmarks for a clause width.
    Thresholds {
        #[arg(long)]
        k: u32,
    },
    /// Scan the per-beta rate functions over a beta grid.
    EtaScan {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = -0.5)]
        beta_min: f64,
        #[arg(long, default_value_t = 0.999)]
        beta_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Evaluate the pair-probability breakdown from a JSON parameter file.
    PsiEval {
        #[arg(long, value_name = "FILE")]
        r#in: PathBuf,
    },
    /// Pair second-moment exponent over an alpha grid "lo:hi:steps".
    PairExponent {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "0.01:0.5:50")]
        alpha_grid: String,
    },
    /// Balls-into-bins occupancy: exact empty-bin law, capacitated
    /// conditioned probabilities, or Monte Carlo throws.
    Occupancy {
        #[arg(long)]
        bins: usize,
        #[arg(long)]
        balls: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: OccMode,
        /// File with one per-bin capacity per line (default: no caps).
        #[arg(long, value_name = "FILE")]
        capacities: Option<PathBuf>,
        /// Uniform cap applied on top of per-bin capacities.
        #[arg(long)]
        hard_cap: Option<usize>,
        /// Condition on this exact number of empty bins.
        #[arg(long)]
        target_empty: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo estimate of the solution count and beta-window counts
    /// against their closed-form expectations.
    Montecarlo {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional beta window [lo, hi) for the windowed count.
        #[arg(long)]
        beta_lo: Option<f64>,
        #[arg(long)]
        beta_hi: Option<f64>,
    },
    /// Saddle-point local limit evaluation for a lattice sum.
    Llt {
        /// Generating function: poisson:L, binomial:N:P, ztpoisson:L, or
        /// finite:c0,c1,...
        #[arg(long)]
        pgf: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OccMode {
    Exact,
    Mc,
}

/// Parse argv, dispatch, print; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    init_threads(cli.threads);
    match dispatch(&cli) {
        Ok(text) => match emit(&cli.out, &text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(Error::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let from_env = std::env::var("NAESAT_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(t) = flag.or(from_env) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_formula(path: &PathBuf) -> Result<Formula> {
    let text = std::fs::read_to_string(path).map_err(Error::Io)?;
    parse_naecnf(&text)
}

fn instance_params(f: &Formula, r_override: Option<f64>) -> Result<RateParams> {
    match r_override {
        Some(r) => RateParams::new(f.k as u32, r),
        None => RateParams::from_instance(f.k as u32, f.n, f.m()),
    }
}

/// Group per-solution summaries by free count: [free, beta, count] rows.
fn beta_histogram(summaries: &[SolutionSummary]) -> Vec<Value> {
    let mut groups: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for s in summaries {
        let e = groups.entry(s.free_count).or_insert((s.beta, 0));
        e.1 += 1;
    }
    groups
        .into_iter()
        .map(|(free, (beta, count))| json!({"free": free, "beta": beta, "count": count}))
        .collect()
}

fn dispatch(cli: &Cli) -> Result<String> {
    let started = Instant::now();
    match &cli.command {
        Command::Gen { k, n, m, seed } => {
            let f = sample_uniform_formula(*n, *m, *k, *seed)?;
            Ok(to_naecnf(&f))
        }
        Command::Degseq { k, n, m, seed, alpha } => {
            let d = sample_degree_sequence(*n, *m, *k, *seed)?;
            let params = RateParams::from_instance(*k as u32, *n, *m)?;
            let stats = degree_sequence_stats(&d, &params, *alpha);
            let volume = volume_tail_check(&d, &params);
            let rec = RunRecord::new(
                "degseq",
                json!({"k": k, "n": n, "m": m, "alpha": alpha}),
                Some(*seed),
                json!({"degrees": d.degrees, "stats": stats, "volume": volume}),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Count { r#in, r } => {
            let f = read_formula(r#in)?;
            let params = instance_params(&f, *r)?;
            let sols = enumerate_solutions_capped(&f, DEFAULT_ENUM_CAP)?;
            let summaries = sols.summaries(&f, &params)?;
            let rec = RunRecord::new(
                "count",
                json!({"in": r#in, "r": params.r}),
                None,
                json!({
                    "n": f.n, "m": f.m(), "k": f.k,
                    "Z": sols.len(),
                    "beta_histogram": beta_histogram(&summaries),
                }),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Clusters { r#in, theta, r, beta } => {
            let f = read_formula(r#in)?;
            let params = instance_params(&f, *r)?;
            let sols = enumerate_solutions_capped(&f, DEFAULT_ENUM_CAP)?;
            let summaries = sols.summaries(&f, &params)?;
            let decomp = cluster_decomposition(&sols, *theta)?;
            let hist = pair_distance_histogram(&sols, f.k as u32, *theta)?;
            let window_balls = beta.map(|b| {
                let delta = 1.0 / (params.exp_neg_lambda() * f.n as f64);
                beta_ball_count(&decomp, &summaries, BetaWindow { lo: b, hi: b + delta })
            });
            let rec = RunRecord::new(
                "clusters",
                json!({"in": r#in, "theta": theta, "r": params.r, "beta": beta}),
                None,
                json!({
                    "n": f.n, "m": f.m(), "k": f.k,
                    "Z": sols.len(),
                    "N_balls": decomp.n_balls,
                    "N_components": decomp.n_components,
                    "N_beta_balls": window_balls,
                    "beta_histogram": beta_histogram(&summaries),
                    "dichotomy_mass": hist.middle_band_mass,
                }),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Rigidity { r#in, xi, theta, sigma } => {
            let f = read_formula(r#in)?;
            let sols = enumerate_solutions_capped(&f, DEFAULT_ENUM_CAP)?;
            if sols.is_empty() {
                return Err(Error::domain("formula has no solutions"));
            }
            let mask = sigma.unwrap_or(sols.masks()[0]);
            let rigid = rigid_variables(&sols, mask, *xi, *theta)?;
            let rec = RunRecord::new(
                "rigidity",
                json!({"in": r#in, "xi": xi, "theta": theta, "sigma": mask}),
                None,
                json!({
                    "n": f.n, "m": f.m(), "k": f.k, "Z": sols.len(),
                    "xi_rigid": rigid.xi_rigid,
                    "cluster_rigid": rigid.cluster_rigid,
                }),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Pairs { r#in, r, theta, sigma, tau } => {
            let f = read_formula(r#in)?;
            let params = instance_params(&f, *r)?;
            if let (Some(s), Some(t)) = (sigma, tau) {
                let stats = pair_profile_stats(
                    &f,
                    &Assignment::from_mask(*s, f.n),
                    &Assignment::from_mask(*t, f.n),
                    &params,
                )?;
                let rec = RunRecord::new(
                    "pairs",
                    json!({"in": r#in, "sigma": s, "tau": t, "r": params.r}),
                    None,
                    serde_json::to_value(&stats).expect("stats serialize"),
                    Vec::new(),
                    started,
                );
                return Ok(rec.to_json());
            }
            let sols = enumerate_solutions_capped(&f, DEFAULT_ENUM_CAP)?;
            let hist = pair_distance_histogram(&sols, f.k as u32, *theta)?;
            if cli.format == Format::Csv {
                let mut out = String::from("distance,count\n");
                for (d, c) in hist.counts.iter().enumerate() {
                    out.push_str(&format!("{d},{c}\n"));
                }
                return Ok(out);
            }
            let rec = RunRecord::new(
                "pairs",
                json!({"in": r#in, "theta": theta, "r": params.r}),
                None,
                json!({
                    "n": f.n, "m": f.m(), "k": f.k, "Z": sols.len(),
                    "histogram": hist,
                    "dichotomy_mass": hist.middle_band_mass,
                }),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::SpSample { r#in, theta, seed, trials } => {
            let f = read_formula(r#in)?;
            let sols = enumerate_solutions_capped(&f, DEFAULT_ENUM_CAP)?;
            let decomp = cluster_decomposition(&sols, *theta)?;
            let draws = sp_sample(&decomp, &sols, *seed, *trials as usize)?;
            let masks: Vec<u64> = draws.iter().map(Assignment::to_mask).collect();
            let rec = RunRecord::new(
                "sp-sample",
                json!({"in": r#in, "theta": theta, "trials": trials}),
                Some(*seed),
                json!({"samples": masks, "N_components": decomp.n_components}),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Thresholds { k } => {
            let t = thresholds(*k)?;
            let rec = RunRecord::new(
                "thresholds",
                json!({"k": k}),
                None,
                serde_json::to_value(&t).expect("thresholds serialize"),
                dropped_terms().iter().map(|s| s.to_string()).collect(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::EtaScan { k, r, beta_min, beta_max, steps } => {
            if *steps < 2 {
                return Err(Error::domain("steps must be >= 2"));
            }
            if *steps > 1_000_000 {
                return Err(Error::domain(format!(
                    "grid too large ({steps} points; limit 1000000)"
                )));
            }
            let params = RateParams::new(*k, *r)?;
            let mut rows = Vec::with_capacity(*steps);
            for i in 0..*steps {
                let beta = beta_min + (beta_max - beta_min) * i as f64 / (*steps as f64 - 1.0);
                rows.push(beta_exponents(&params, beta)?);
            }
            if cli.format == Format::Csv {
                let mut out = String::from("beta,f,h,g,eta,z_simplified\n");
                for e in &rows {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        e.beta, e.f, e.h, e.g, e.eta, e.z_simplified
                    ));
                }
                return Ok(out);
            }
            let rec = RunRecord::new(
                "eta-scan",
                json!({"k": k, "r": r, "beta_min": beta_min, "beta_max": beta_max, "steps": steps}),
                None,
                serde_json::to_value(&rows).expect("rows serialize"),
                dropped_terms().iter().map(|s| s.to_string()).collect(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::PsiEval { r#in } => {
            let text = std::fs::read_to_string(r#in).map_err(Error::Io)?;
            let input: PsiInput = serde_json::from_str(&text)
                .map_err(|e| Error::parse(format!("bad psi parameter file: {e}")))?;
            let params = RateParams::new(input.k, input.r)?;
            let breakdown = psi_breakdown(&params, &input.fractions, &input.overlap)?;
            let rec = RunRecord::new(
                "psi-eval",
                serde_json::to_value(&input).expect("input serialize"),
                None,
                serde_json::to_value(&breakdown).expect("breakdown serialize"),
                dropped_terms().iter().map(|s| s.to_string()).collect(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::PairExponent { k, r, alpha_grid } => {
            let (lo, hi, steps) = parse_grid(alpha_grid)?;
            let params = RateParams::new(*k, *r)?;
            let mut rows = Vec::with_capacity(steps);
            for i in 0..steps {
                let alpha = lo + (hi - lo) * i as f64 / (steps as f64 - 1.0);
                rows.push((alpha, pair_exponent(&params, alpha)?));
            }
            if cli.format == Format::Csv {
                let mut out = String::from("alpha,pair_exponent\n");
                for (a, v) in &rows {
                    out.push_str(&format!("{a},{v}\n"));
                }
                return Ok(out);
            }
            let rec = RunRecord::new(
                "pair-exponent",
                json!({"k": k, "r": r, "alpha_grid": alpha_grid}),
                None,
                json!({
                    "rows": rows.iter().map(|(a, v)| json!({"alpha": a, "exponent": v})).collect::<Vec<_>>(),
                    "first_moment_exponent": first_moment_exponent(&params),
                }),
                dropped_terms().iter().map(|s| s.to_string()).collect(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Occupancy {
            bins,
            balls,
            mode,
            capacities,
            hard_cap,
            target_empty,
            trials,
            seed,
        } => {
            let caps = match capacities {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(Error::Io)?;
                    let parsed: Result<Vec<usize>> = text
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<usize>()
                                .map_err(|e| Error::parse(format!("bad capacity '{t}': {e}")))
                        })
                        .collect();
                    Some(parsed?)
                }
                None => None,
            };
            let results = match mode {
                OccMode::Exact => match target_empty {
                    None => {
                        let pmf = empty_bins_exact(*bins, *balls)?;
                        json!({"empty_bins_pmf": pmf})
                    }
                    Some(target) => {
                        let mut model = OccupancyModel::multinomial(*bins, *balls);
                        if let Some(c) = &caps {
                            if c.len() != *bins {
                                return Err(Error::domain(format!(
                                    "capacity file has {} entries for {bins} bins",
                                    c.len()
                                )));
                            }
                            model.capacities = c.iter().map(|&x| Capacity::Finite(x)).collect();
                        }
                        model.hard_cap = *hard_cap;
                        let cp = capacitated_conditioned_prob(&model, *target)?;
                        serde_json::to_value(&cp).expect("prob serialize")
                    }
                },
                OccMode::Mc => {
                    let mut model = OccupancyModel::multinomial(*bins, *balls);
                    let finite = caps
                        .clone()
                        .unwrap_or_else(|| vec![*balls; *bins]);
                    if finite.len() != *bins {
                        return Err(Error::domain(format!(
                            "capacity file has {} entries for {bins} bins",
                            finite.len()
                        )));
                    }
                    model.capacities = finite.iter().map(|&x| Capacity::Finite(x)).collect();
                    model.hard_cap = *hard_cap;
                    let stats = capacitated_throw_mc(&model, *trials, *seed)?;
                    serde_json::to_value(&stats).expect("stats serialize")
                }
            };
            let rec = RunRecord::new(
                "occupancy",
                json!({
                    "bins": bins, "balls": balls, "mode": format!("{mode:?}"),
                    "hard_cap": hard_cap, "target_empty": target_empty,
                    "trials": trials,
                }),
                Some(*seed),
                results,
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Montecarlo { k, n, m, trials, seed, beta_lo, beta_hi } => {
            if *n > DEFAULT_ENUM_CAP {
                return Err(Error::domain(format!(
                    "n = {n} exceeds the enumeration cap {DEFAULT_ENUM_CAP}"
                )));
            }
            let params = RateParams::from_instance(*k as u32, *n, *m)?;
            let window = match (beta_lo, beta_hi) {
                (Some(lo), Some(hi)) => Some(BetaWindow { lo: *lo, hi: *hi }),
                (None, None) => None,
                _ => {
                    return Err(Error::domain(
                        "--beta-lo and --beta-hi must be given together",
                    ))
                }
            };
            use rayon::prelude::*;
            let per_trial: Result<Vec<(u64, u64)>> = (0..*trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(*seed, t);
                    let f = sample_uniform_formula_with(*n, *m, *k, &mut rng)?;
                    let sols = enumerate_solutions_capped(&f, DEFAULT_ENUM_CAP)?;
                    let windowed = match &window {
                        Some(w) => {
                            let summaries = sols.summaries(&f, &params)?;
                            crate::enumerate::count_beta_heavy(&summaries, *w) as u64
                        }
                        None => 0,
                    };
                    Ok((sols.len() as u64, windowed))
                })
                .collect();
            let per_trial = per_trial?;
            let t = *trials as f64;
            let mean = per_trial.iter().map(|&(z, _)| z as f64).sum::<f64>() / t;
            let var = per_trial
                .iter()
                .map(|&(z, _)| (z as f64 - mean).powi(2))
                .sum::<f64>()
                / (t - 1.0).max(1.0);
            let se = (var / t).sqrt();
            // E[Z] = 2^n (1 - 2^{1-k})^m, computed in logs for safety.
            let ln_expected = (*n as f64) * std::f64::consts::LN_2
                + *m as f64 * (-(1.0 - params.k as f64).exp2()).ln_1p();
            let window_mean = window.as_ref().map(|_| {
                per_trial.iter().map(|&(_, w)| w as f64).sum::<f64>() / t
            });
            let rec = RunRecord::new(
                "montecarlo",
                json!({"k": k, "n": n, "m": m, "trials": trials,
                       "beta_lo": beta_lo, "beta_hi": beta_hi}),
                Some(*seed),
                json!({
                    "mean_Z": mean,
                    "stderr_Z": se,
                    "expected_Z": ln_expected.exp(),
                    "mean_window_count": window_mean,
                }),
                Vec::new(),
                started,
            );
            Ok(rec.to_json())
        }
        Command::Llt { pgf, n, alpha } => {
            let pgf = parse_pgf(pgf)?;
            let (zeta, xi) = crate::rate::llt::saddle_point(&pgf, *alpha)?;
            let prob = crate::rate::llt::local_limit_prob(&pgf, *n, *alpha)?;
            let rec = RunRecord::new(
                "llt",
                json!({"n": n, "alpha": alpha}),
                None,
                json!({"zeta": zeta, "xi": xi, "local_limit_prob": prob}),
                vec!["O(1/n) correction of the local limit estimate".to_string()],
                started,
            );
            Ok(rec.to_json())
        }
    }
}

/// Parameter file accepted by `psi-eval`.
#[derive(Debug, serde::Serialize, serde::Deserialize)]
struct PsiInput {
    k: u32,
    r: f64,
    fractions: ProfileFractions,
    overlap: OverlapVector,
}

fn parse_grid(spec: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::parse(format!(
            "grid must be lo:hi:steps, got '{spec}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| Error::parse(format!("bad grid lower bound: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| Error::parse(format!("bad grid upper bound: {e}")))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|e| Error::parse(format!("bad grid step count: {e}")))?;
    if steps < 2 {
        return Err(Error::domain("grid needs at least 2 points"));
    }
    if steps > 1_000_000 {
        return Err(Error::domain(format!(
            "grid too large ({steps} points; limit 1000000)"
        )));
    }
    Ok((lo, hi, steps))
}

fn parse_pgf(spec: &str) -> Result<Pgf> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |what: &str| Error::parse(format!("bad pgf spec '{spec}': {what}"));
    match parts[0] {
        "poisson" if parts.len() == 2 => {
            let lambda: f64 = parts[1].parse().map_err(|_| bad("lambda not a number"))?;
            Ok(Pgf::Poisson { lambda })
        }
        "ztpoisson" if parts.len() == 2 => {
            let lambda: f64 = parts[1].parse().map_err(|_| bad("lambda not a number"))?;
            Ok(Pgf::ZeroTruncatedPoisson { lambda })
        }
        "binomial" if parts.len() == 3 => {
            let n: u64 = parts[1].parse().map_err(|_| bad("N not an integer"))?;
            let p: f64 = parts[2].parse().map_err(|_| bad("p not a number"))?;
            Ok(Pgf::Binomial { n, p })
        }
        "finite" if parts.len() == 2 => {
            let coeffs: std::result::Result<Vec<f64>, _> =
                parts[1].split(',').map(str::parse::<f64>).collect();
            Ok(Pgf::Finite {
                coeffs: coeffs.map_err(|_| bad("coefficients must be numbers"))?,
            })
        }
        _ => Err(bad("expected poisson:L, ztpoisson:L, binomial:N:P, or finite:c0,c1,...")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0.1:0.5:5").unwrap(), (0.1, 0.5, 5));
        assert!(parse_grid("0.1:0.5").is_err());
        assert!(parse_grid("a:b:c").is_err());
        assert!(parse_grid("0:1:1").is_err());
    }

    #[test]
    fn pgf_parsing() {
        assert!(matches!(
            parse_pgf("poisson:2.5").unwrap(),
            Pgf::Poisson { .. }
        ));
        assert!(matches!(
            parse_pgf("binomial:10:0.25").unwrap(),
            Pgf::Binomial { .. }
        ));
        assert!(matches!(parse_pgf("finite:0.5,0.5").unwrap(), Pgf::Finite { .. }));
        assert!(parse_pgf("gaussian:1").is_err());
    }
}
