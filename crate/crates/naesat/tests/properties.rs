//! Randomized property suite: the module-level invariants, each checked
//! over at least 10^3 generated cases.

use proptest::prelude::*;

use naesat::enumerate::enumerate_solutions;
use naesat::formula::{parse_naecnf, to_naecnf, Lit};
use naesat::gen::sample_uniform_formula;
use naesat::occupancy::{capacitated_conditioned_prob, empty_bins_exact, Capacity, OccupancyModel};
use naesat::rate::{
    eta_rate, f_rate, first_moment_exponent, h_rate, pair_exponent,
};
use naesat::rng::master_rng;
use naesat::space::clusters::cluster_decomposition;
use naesat::space::pairs::{pair_profile_stats, position_colors, positional_support_counts};
use naesat::space::structures::rigid_variables;
use naesat::{Assignment, Formula, RateParams};

use rand::Rng;

const LN2: f64 = std::f64::consts::LN_2;

fn small_formula(n: usize, m: usize, k: usize, seed: u64) -> Formula {
    sample_uniform_formula(n, m, k, seed).unwrap()
}

/// A formula with k distinct variables per clause whose all-true
/// assignment is a solution (signs non-constant per clause).
fn distinct_var_formula(n: usize, m: usize, k: usize, seed: u64) -> Formula {
    let mut rng = master_rng(seed);
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let mut vars: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.gen_range(i..n);
            vars.swap(i, j);
        }
        let sign_mask = loop {
            let s: u32 = rng.gen_range(0..(1u32 << k));
            if s != 0 && s != (1u32 << k) - 1 {
                break s;
            }
        };
        clauses.push(
            (0..k)
                .map(|i| Lit::new(vars[i], sign_mask >> i & 1 == 1))
                .collect(),
        );
    }
    Formula::new(k, n, clauses).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The solution set and position colors are invariant under inverting
    /// every variable.
    #[test]
    fn inversion_symmetry(
        n in 4usize..=10,
        m in 2usize..=12,
        k in 3usize..=4,
        seed in any::<u64>(),
        mask in any::<u64>(),
    ) {
        let f = small_formula(n, m, k, seed);
        let sigma = Assignment::from_mask(mask & ((1 << n) - 1), n);
        let inv = sigma.invert();
        prop_assert_eq!(
            f.is_nae_solution(&sigma).unwrap(),
            f.is_nae_solution(&inv).unwrap()
        );
        prop_assert_eq!(
            position_colors(&f, &sigma).unwrap(),
            position_colors(&f, &inv).unwrap()
        );
    }

    /// On clauses with k distinct variables the positional (sign-minority)
    /// support counts coincide with the flip-test support counts.
    #[test]
    fn flip_test_consistency(
        n in 5usize..=10,
        m in 2usize..=10,
        k in 3usize..=4,
        seed in any::<u64>(),
    ) {
        let f = distinct_var_formula(n, m, k.min(n), seed);
        let sigma = Assignment::all_true(n);
        let profile = f.support_profile(&sigma).unwrap();
        prop_assert_eq!(
            profile.support_counts,
            positional_support_counts(&f, &sigma).unwrap()
        );
    }

    /// eta is concave in beta with its maximum at 1/2, and h - f equals
    /// the beta-independent offset (2 rho - ln2)/2^k.
    #[test]
    fn eta_shape_and_h_f_identity(
        k in 3u32..=20,
        rfrac in 0.1f64..=1.3,
        b1 in -0.99f64..=0.99,
        b3 in -0.99f64..=0.99,
    ) {
        let r = rfrac * (k as f64 - 1.0).exp2() * LN2;
        let params = RateParams::new(k, r).unwrap();
        let mid = 0.5 * (b1 + b3);
        let chord = 0.5 * (eta_rate(&params, b1) + eta_rate(&params, b3));
        prop_assert!(eta_rate(&params, mid) >= chord - 1e-12);
        prop_assert!(eta_rate(&params, 0.5) >= eta_rate(&params, mid) - 1e-12);
        let gap = h_rate(&params, mid) - f_rate(&params, mid)
            - (2.0 * params.rho - LN2) / (k as f64).exp2();
        prop_assert!(gap.abs() <= 1e-12, "h - f identity off by {}", gap);
    }

    /// The pair exponent at overlap 1/2 doubles the first-moment exponent.
    #[test]
    fn pair_exponent_doubles(
        k in 4u32..=24,
        rfrac in 0.3f64..=1.2,
    ) {
        let r = rfrac * (k as f64 - 1.0).exp2() * LN2;
        let params = RateParams::new(k, r).unwrap();
        let gap = (pair_exponent(&params, 0.5).unwrap()
            - 2.0 * first_moment_exponent(&params)).abs();
        prop_assert!(gap <= 1e-12, "gap {}", gap);
    }

    /// Every ball cluster is contained in the connected component of its
    /// centre.
    #[test]
    fn cluster_containment(
        n in 4usize..=9,
        m in 2usize..=10,
        seed in any::<u64>(),
        theta in 0.05f64..=0.95,
    ) {
        let f = small_formula(n, m, 3, seed);
        let sols = enumerate_solutions(&f).unwrap();
        prop_assume!(!sols.is_empty());
        let d = cluster_decomposition(&sols, theta).unwrap();
        for (i, ball) in d.ball_clusters.iter().enumerate() {
            for &j in ball {
                prop_assert_eq!(d.component_of[j], d.component_of[i]);
            }
        }
    }

    /// The xi-rigid set shrinks (or stays equal) as xi grows.
    #[test]
    fn rigid_set_shrinks_with_xi(
        n in 5usize..=9,
        m in 2usize..=10,
        seed in any::<u64>(),
        x1 in 0.05f64..=0.45,
        dx in 0.0f64..=0.5,
    ) {
        let f = small_formula(n, m, 3, seed);
        let sols = enumerate_solutions(&f).unwrap();
        prop_assume!(!sols.is_empty());
        let sigma = sols.masks()[0];
        let r1 = rigid_variables(&sols, sigma, x1, 0.2).unwrap();
        let r2 = rigid_variables(&sols, sigma, x1 + dx, 0.2).unwrap();
        prop_assert!(r2.xi_rigid.is_subset(&r1.xi_rigid));
    }

    /// A pair of identical solutions has an empty mixed-support class.
    #[test]
    fn gamma_empty_on_identical_pair(
        n in 4usize..=9,
        m in 2usize..=8,
        seed in any::<u64>(),
    ) {
        let f = small_formula(n, m, 3, seed);
        let params = RateParams::from_instance(3, n, m).unwrap();
        let sols = enumerate_solutions(&f).unwrap();
        prop_assume!(!sols.is_empty());
        for sigma in sols.assignments().take(4) {
            let st = pair_profile_stats(&f, &sigma, &sigma, &params).unwrap();
            prop_assert_eq!(st.gamma_count, 0);
        }
    }

    /// The conditioned occupancy DP defines a probability law over the
    /// empty-bin count, and the exact empty-bins pmf sums to one.
    #[test]
    fn occupancy_normalization(
        bins in 2usize..=5,
        cap_seed in any::<u64>(),
        p in 0.05f64..=0.95,
        balls in 0usize..=20,
        exact_bins in 1usize..=8,
    ) {
        let mut rng = master_rng(cap_seed);
        let caps: Vec<usize> = (0..bins).map(|_| rng.gen_range(1..=6)).collect();
        let slots: usize = caps.iter().sum();
        let total = rng.gen_range(0..=slots);
        let model = OccupancyModel {
            capacities: caps.iter().map(|&c| Capacity::Finite(c)).collect(),
            hard_cap: None,
            per_slot_prob: p,
            total_balls: total,
        };
        let mut mass = 0.0;
        for e in 0..=bins {
            let lp = capacitated_conditioned_prob(&model, e).unwrap().log_prob;
            if lp > f64::NEG_INFINITY {
                mass += lp.exp();
            }
        }
        prop_assert!((mass - 1.0).abs() <= 1e-9, "conditioned mass {}", mass);
        let pmf = empty_bins_exact(exact_bins, balls).unwrap();
        let s: f64 = pmf.iter().sum();
        prop_assert!((s - 1.0).abs() <= 1e-12, "exact mass {}", s);
    }

    /// Serializing a formula and parsing it back is the identity.
    #[test]
    fn naecnf_round_trip(
        n in 3usize..=12,
        m in 1usize..=15,
        k in 3usize..=5,
        seed in any::<u64>(),
    ) {
        let f = small_formula(n, m, k, seed);
        let back = parse_naecnf(&to_naecnf(&f)).unwrap();
        prop_assert_eq!(f.clauses(), back.clauses());
        prop_assert_eq!(f.n, back.n);
    }
}
