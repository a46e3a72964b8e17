//! Threshold formulas and the numeric r_* root.

use serde::{Deserialize, Serialize};

use crate::params::RateParams;
use crate::rate::g_rate;
use crate::{Error, Result};

/// The density landmarks for clause width k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBounds {
    /// Exact first-moment root: -ln2 / ln(1 - 2^{1-k}).
    pub r_first_exact: f64,
    /// Its expansion 2^{k-1} ln2 - ln2/2.
    pub r_first_asymp: f64,
    /// Condensation landmark 2^{k-1} ln2 - ln2.
    pub r_cond: f64,
    /// Survey-propagation scale estimate 2^{k-1} ln(k)/k.
    pub r_sh_estimate: f64,
    /// Closed form 2^{k-1} ln2 - ln2/2 - 1/4 (the root of eta(1/2) = 0
    /// in rho).
    pub r_star_closed: f64,
    /// Numeric root in r of g(1/2) = -k^3 4^{-k+1} (g is maximized at
    /// beta = 1/2, so this is the least density past which g < -k^3
    /// 4^{-k+1} for every beta).
    pub r_star_numeric: f64,
    /// The guaranteed lower-bound version r_star_closed - k^14 2^{-k}.
    pub r_star_lower: f64,
    /// The sharp threshold is r_star_closed up to an unspecified vanishing
    /// sequence in k; documented, never computed.
    pub eps_k_note: String,
}

/// Compute all threshold bounds for clause width k >= 3.
pub fn thresholds(k: u32) -> Result<ThresholdBounds> {
    if k < 3 {
        return Err(Error::domain("k must be >= 3"));
    }
    let ln2 = std::f64::consts::LN_2;
    let kf = k as f64;
    let pow = (kf - 1.0).exp2(); // 2^{k-1}
    let x = (1.0 - kf).exp2(); // 2^{1-k}
    let r_first_exact = -ln2 / (-x).ln_1p();
    let r_first_asymp = pow * ln2 - ln2 / 2.0;
    let r_star_closed = pow * ln2 - ln2 / 2.0 - 0.25;
    let target = -kf.powi(3) * (1.0 - kf).exp2() * (-kf).exp2() * 2.0; // -k^3 4^{-k+1}
    // g(1/2) is strictly decreasing in r near the threshold; bisect
    // F(r) = g_{r}(1/2) - target between a bracket around r_star_closed.
    let f = |r: f64| -> f64 {
        let params = RateParams::new(k, r).expect("bracket stays positive");
        g_rate(&params, 0.5) - target
    };
    let (mut lo, mut hi) = (r_star_closed - 1.0, r_star_closed + 1.0);
    while f(lo) <= 0.0 {
        lo -= 1.0;
        if lo <= 0.0 {
            return Err(Error::domain("failed to bracket r_star from below"));
        }
    }
    while f(hi) >= 0.0 {
        hi += 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-12 {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_star_numeric = 0.5 * (lo + hi);
    Ok(ThresholdBounds {
        r_first_exact,
        r_first_asymp,
        r_cond: pow * ln2 - ln2,
        r_sh_estimate: pow * kf.ln() / kf,
        r_star_closed,
        r_star_numeric,
        r_star_lower: r_star_closed - kf.powi(14) * (-kf).exp2(),
        eps_k_note: "the true threshold equals r_star_closed + eps_k with eps_k -> 0 \
                     as k -> infinity; no explicit eps_k is known"
            .to_string(),
    })
}
