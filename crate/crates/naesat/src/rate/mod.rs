//! The analytic engine: closed-form rate functions and exponents, threshold
//! formulas, saddle-point local-limit evaluation, and the second-moment
//! pair ("psi") machinery.
//!
//! All returned values drop vanishing asymptotic remainders (o_k(1),
//! O_k(4^{-k}) and friends); [`dropped_terms`] names them so downstream
//! comparisons stay honest.

pub mod llt;
pub mod psi;
pub mod thresholds;

use serde::{Deserialize, Serialize};

use crate::params::RateParams;
use crate::{Error, Result};

pub use llt::{binom_asympt, gaussian_local_limit, local_limit_prob, saddle_point, BinomAsympt, Pgf};
pub use psi::{psi_breakdown, tame_check, taylor_bound, DeltaVector, ProfileFractions, PsiBreakdown, TaylorConstants};
pub use thresholds::{thresholds, ThresholdBounds};

/// Names of the asymptotic remainders dropped from every analytic value.
pub fn dropped_terms() -> &'static [&'static str] {
    &[
        "o_k(1) in the condensation and decorrelation exponents",
        "O_k(4^{-k}) binomial-occupancy error in f(beta)",
        "O_k(k 4^{-k}) capacitated-occupancy error",
        "O(1/n) local-limit prefactor corrections beyond the stated form",
    ]
}

/// The per-beta exponent bundle.
///
/// Units: `f`, `h`, `g` are per-n exponents. `eta` and `z_simplified` are
/// per-(n/2^k) — multiply by 2^{-k} for a per-n quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaExponents {
    pub beta: f64,
    /// f(beta) = -((1-b) ln(1-b) + b) e^{-lambda}   [per n]
    pub f: f64,
    /// h(beta) = (2 rho - ln2)/2^k + f(beta)        [per n]
    pub h: f64,
    /// g(beta) = h(beta) - (1-b) e^{-lambda} ln 2   [per n]
    pub g: f64,
    /// eta(beta) = 2 rho - ln2 - (1-b) ln(2-2b) - b [per n/2^k]
    pub eta: f64,
    /// 2 rho - ln2 - (1-b) ln(1-b) - b              [per n/2^k]
    pub z_simplified: f64,
}

/// (1-b) ln(1-b) with the b -> 1 limit 0.
#[inline]
fn xlnx_from_one(beta: f64) -> f64 {
    let u = 1.0 - beta;
    if u <= 0.0 {
        0.0
    } else {
        u * u.ln()
    }
}

/// f(beta) = -((1-beta) ln(1-beta) + beta) e^{-lambda}.
pub fn f_rate(params: &RateParams, beta: f64) -> f64 {
    -(xlnx_from_one(beta) + beta) * params.exp_neg_lambda()
}

/// h(beta) = (2 rho - ln 2)/2^k + f(beta), the per-n exponent of E[Z_beta].
pub fn h_rate(params: &RateParams, beta: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    (2.0 * params.rho - ln2) / (params.k as f64).exp2() + f_rate(params, beta)
}

/// g(beta) = h(beta) - (1-beta) e^{-lambda} ln 2.
pub fn g_rate(params: &RateParams, beta: f64) -> f64 {
    h_rate(params, beta) - (1.0 - beta) * params.exp_neg_lambda() * std::f64::consts::LN_2
}

/// eta(beta) = 2 rho - ln2 - (1-beta) ln(2-2beta) - beta, per n/2^k.
/// Positive eta marks feasible beta.
pub fn eta_rate(params: &RateParams, beta: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let u = 1.0 - beta;
    let term = if u <= 0.0 { 0.0 } else { u * (2.0 * u).ln() };
    2.0 * params.rho - ln2 - term - beta
}

/// 2 rho - ln2 - (1-beta) ln(1-beta) - beta, per n/2^k: the simplified
/// exponent of E[Z_beta] on the 2^{-k} scale.
pub fn z_simplified_rate(params: &RateParams, beta: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    2.0 * params.rho - ln2 - xlnx_from_one(beta) - beta
}

/// All the per-beta exponents at once. Requires beta <= 1 (the functions
/// use the (1-b) ln(1-b) -> 0 limit at beta = 1).
pub fn beta_exponents(params: &RateParams, beta: f64) -> Result<BetaExponents> {
    if beta > 1.0 + 1e-12 {
        return Err(Error::domain(format!("beta must be <= 1, got {beta}")));
    }
    let beta = beta.min(1.0);
    Ok(BetaExponents {
        beta,
        f: f_rate(params, beta),
        h: h_rate(params, beta),
        g: g_rate(params, beta),
        eta: eta_rate(params, beta),
        z_simplified: z_simplified_rate(params, beta),
    })
}

/// Per-n logarithm of E[Z] = 2^n (1 - 2^{1-k})^m: ln2 + r ln(1 - 2^{1-k}).
pub fn first_moment_exponent(params: &RateParams) -> f64 {
    let x = (1.0 - params.k as f64).exp2(); // 2^{1-k}
    std::f64::consts::LN_2 + params.r * (-x).ln_1p()
}

/// Per-n logarithm of the expected number of solution pairs at overlap
/// alpha (fraction of agreeing variables):
/// ln2 - a ln a - (1-a) ln(1-a) + r ln(1 - 2^{2-k} + 2^{1-k}(a^k + (1-a)^k)).
pub fn pair_exponent(params: &RateParams, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must be in (0,1), got {alpha}")));
    }
    let k = params.k as f64;
    let y = (1.0 - k).exp2(); // 2^{1-k}
    let inner = -2.0 * y + y * (alpha.powi(params.k as i32) + (1.0 - alpha).powi(params.k as i32));
    Ok(std::f64::consts::LN_2 - alpha * alpha.ln() - (1.0 - alpha) * (1.0 - alpha).ln()
        + params.r * inner.ln_1p())
}

/// The interval of feasible beta (eta > 0), found by bisecting the strictly
/// concave eta around its argmax 1/2. None when eta(1/2) < 0. Boundary
/// zeros (eta = 0 at an endpoint) are included.
pub fn feasible_beta_interval(params: &RateParams) -> Option<(f64, f64)> {
    let eta = |b: f64| eta_rate(params, b);
    let peak = eta(0.5);
    if peak < 0.0 {
        return None;
    }
    if peak == 0.0 {
        return Some((0.5, 0.5));
    }
    // Lower root: expand the bracket below 1/2 until eta < 0.
    let mut lo = -0.5;
    while eta(lo) >= 0.0 {
        lo = 0.5 - 2.0 * (0.5 - lo);
        if lo < -1e9 {
            break;
        }
    }
    let beta_lo = bisect_root(&eta, lo, 0.5);
    // Upper root: eta(1) = 2 rho - ln2 - 1; if still nonnegative, clamp at 1.
    let beta_hi = if eta(1.0) >= 0.0 {
        1.0
    } else {
        bisect_root(&eta, 1.0, 0.5)
    };
    Some((beta_lo, beta_hi))
}

/// Bisect f between a negative end `neg` and a nonnegative end `pos`.
fn bisect_root(f: &dyn Fn(f64) -> f64, neg: f64, pos: f64) -> f64 {
    let (mut neg, mut pos) = (neg, pos);
    for _ in 0..200 {
        let mid = 0.5 * (neg + pos);
        if (pos - neg).abs() < 1e-13 {
            return mid;
        }
        if f(mid) >= 0.0 {
            pos = mid;
        } else {
            neg = mid;
        }
    }
    0.5 * (neg + pos)
}

/// The beta in (0, 1/2] maximizing the per-n excess of ln E[Z_beta] over
/// the cluster-size exponent (1-beta) e^{-lambda} ln2; returned only when
/// the maximal excess exceeds `margin` (per n).
pub fn beta_star(params: &RateParams, margin: f64) -> Option<f64> {
    let twok = (params.k as f64).exp2();
    let obj = |b: f64| {
        z_simplified_rate(params, b) / twok
            - (1.0 - b) * params.exp_neg_lambda() * std::f64::consts::LN_2
    };
    // Golden-section maximization on (0, 1/2].
    let (mut a, mut b) = (1e-9, 0.5);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    for _ in 0..200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = obj(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = obj(x1);
        }
    }
    let xm = 0.5 * (a + b);
    // The supremum may sit at the right endpoint.
    let (x, v) = if obj(0.5) >= obj(xm) { (0.5, obj(0.5)) } else { (xm, obj(xm)) };
    if v > margin {
        Some(x)
    } else {
        None
    }
}

/// Upper bound on the per-n exponent of E[Z_{beta,gamma}] (solutions with
/// an atypically large gamma-fraction of high-support variables):
/// h(beta) - (ln k / 6) gamma e^{-lambda}. The penalty is only proved for
/// gamma > k^{5/2} e^{-lambda}; outside that range the unpenalized h(beta)
/// is returned and flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZbgBound {
    pub bound: f64,
    pub in_validity_range: bool,
}

pub fn zbetagamma_bound(params: &RateParams, beta: f64, gamma: f64) -> ZbgBound {
    let q = params.exp_neg_lambda();
    let valid = gamma > (params.k as f64).powf(2.5) * q;
    let h = h_rate(params, beta);
    if valid {
        ZbgBound {
            bound: h - (params.k as f64).ln() / 6.0 * gamma * q,
            in_validity_range: true,
        }
    } else {
        ZbgBound {
            bound: h,
            in_validity_range: false,
        }
    }
}
