//! The pair-probability ("psi") machinery of the second moment argument.
//!
//! For a pair of solutions with ball-profile fractions (g_rr, g_rb, g_br,
//! g_bb, gamma) and overlap vector alpha, the probability that a random
//! degree-conditioned formula realizes the pair factors over clause types.
//! Each psi term below is (clause-count fraction) x ln(per-clause
//! probability); the per-clause probabilities are exact conditional
//! probabilities over the clause's sign pattern and the second solution's
//! values on its unconstrained positions (which are i.i.d. Bernoulli(a)
//! with a = alpha_bb):
//!
//! * `psi_sigma` — sign-pattern cost of the first solution alone: each of
//!   the lambda n critical clauses admits 2 of the 2^k sign patterns; each
//!   of the remaining (r - lambda) n clauses admits 2^k - 2k - 2.
//! * `psi_rr` — a clause critical under both solutions with the same
//!   supporting position: the k-1 other positions must take the majority
//!   value, probability a^{k-1} (or (1-a)^{k-1}).
//! * `psi_gamma` — a clause critical under the first solution whose
//!   second-solution support sits at one of the k-1 non-supporting
//!   positions: the k-2 remaining positions are forced, (1-a)^{k-2} or
//!   a^{k-2}.
//! * `psi_rb` — a clause non-critical under the first solution but
//!   supported at a given position under the second: conditional on the
//!   admissible sign patterns, probability q/(2^{k-1}-k-1) with
//!   q = 1 - a^{k-1} - (1-a)^{k-1} - (k-1)a(1-a)^{k-2} (or its mirror).
//! * `psi_br` — a clause critical under the first solution (signs already
//!   fixed by psi_sigma) whose supporting position is non-supporting under
//!   the second: probability q as above, with no extra sign normalization.
//! * `psi_bb` — a clause non-critical under both: conditional probability
//!   (1 - (k+1)2^{2-k} + 2^{1-k} eta(a)) / (1 - (k+1)2^{1-k}), where
//!   eta(a) = 2^{k-1} x Pr[sign pattern bad for the first solution AND
//!   value pattern bad for the second] (bad = fewer than two literals of
//!   some truth value). eta is evaluated by the explicit polynomial below
//!   and cross-checked against exhaustive sign-pattern enumeration in the
//!   acceptance suite.

use serde::{Deserialize, Serialize};

use crate::params::RateParams;
use crate::space::pairs::OverlapVector;
use crate::{Error, Result};

/// Per-n clause/ball profile fractions of a solution pair: g_cc' is the
/// fraction of balls colored c under the second solution and c' under the
/// first (r = red = supporting position, b = blue), gamma the fraction of
/// balls in the mixed-support class Gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileFractions {
    pub g_rr: f64,
    pub g_rb: f64,
    pub g_br: f64,
    pub g_bb: f64,
    pub gamma: f64,
}

/// The evaluated pair-probability exponent, term by term (all per n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiBreakdown {
    pub psi_sigma: f64,
    pub psi_rr: f64,
    pub psi_gamma: f64,
    pub psi_rb: f64,
    pub psi_br: f64,
    pub psi_bb: f64,
    /// xi = g_rb - gamma, the non-Gamma red-blue mass; alpha_xi is the
    /// agreement fraction on it: (g_rb a_rb - gamma a_gamma)/xi.
    pub xi: f64,
    pub alpha_xi: f64,
    /// zeta = g_br - gamma with the analogous alpha_zeta.
    pub zeta: f64,
    pub alpha_zeta: f64,
    /// The doubly-bad sign/value polynomial eta(a) entering psi_bb.
    pub eta_a: f64,
    pub total: f64,
}

/// The explicit doubly-bad polynomial eta(a): 2^{k-1} times the
/// probability (uniform signs, Bernoulli(a) values) that a clause has
/// fewer than two literals of some truth value under BOTH solutions.
pub fn eta_poly(k: u32, a: f64) -> f64 {
    let ki = k as i32;
    let b = 1.0 - a;
    let kf = k as f64;
    a.powi(ki)
        + b.powi(ki)
        + kf * a * b.powi(ki - 1)
        + kf * a.powi(ki - 1) * b
        + kf * (a * b.powi(ki - 1)
            + b * a.powi(ki - 1)
            + a.powi(ki)
            + b.powi(ki)
            + (kf - 1.0) * a.powi(ki - 2) * b * b
            + (kf - 1.0) * a * a * b.powi(ki - 2))
}

/// q(a): probability that a given position is the unique minority among
/// k-1 companions drawn Bernoulli(a), the position's own value being true.
pub fn rb_poly(k: u32, a: f64) -> f64 {
    let ki = k as i32;
    let b = 1.0 - a;
    1.0 - a.powi(ki - 1) - b.powi(ki - 1) - (k as f64 - 1.0) * a * b.powi(ki - 2)
}

fn checked_ln(x: f64, term: &str) -> Result<f64> {
    if x > 0.0 {
        Ok(x.ln())
    } else {
        Err(Error::domain(format!(
            "log operand non-positive ({x}) in term {term}"
        )))
    }
}

/// Evaluate every psi term for the given profile and overlap.
pub fn psi_breakdown(
    params: &RateParams,
    fr: &ProfileFractions,
    overlap: &OverlapVector,
) -> Result<PsiBreakdown> {
    let k = params.k;
    let kf = k as f64;
    let ln2 = std::f64::consts::LN_2;
    let (r, lambda) = (params.r, params.lambda);
    let a = overlap
        .a_bb
        .ok_or_else(|| Error::domain("alpha_bb must be defined"))?;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain(format!("alpha_bb must be in (0,1), got {a}")));
    }
    let xi = fr.g_rb - fr.gamma;
    let zeta = fr.g_br - fr.gamma;
    if xi < -1e-15 || zeta < -1e-15 {
        return Err(Error::domain(
            "profile requires g_rb >= gamma and g_br >= gamma",
        ));
    }
    let two1mk = (1.0 - kf).exp2();
    let noncrit = 1.0 - (kf + 1.0) * two1mk; // admissible non-critical sign fraction

    let psi_sigma =
        (1.0 - kf) * lambda * ln2 + (r - lambda) * checked_ln(noncrit, "psi_sigma")?;

    let a_rr = overlap.a_rr.unwrap_or(0.5);
    let psi_rr = if fr.g_rr == 0.0 {
        0.0
    } else {
        fr.g_rr
            * (kf - 1.0)
            * (a_rr * checked_ln(a, "psi_rr")? + (1.0 - a_rr) * checked_ln(1.0 - a, "psi_rr")?)
    };

    let a_gamma = overlap.a_gamma.unwrap_or(0.5);
    let psi_gamma = if fr.gamma == 0.0 {
        0.0
    } else {
        fr.gamma
            * (kf - 2.0)
            * (a_gamma * checked_ln(1.0 - a, "psi_gamma")?
                + (1.0 - a_gamma) * checked_ln(a, "psi_gamma")?)
    };

    let q1 = rb_poly(k, a);
    let q0 = rb_poly(k, 1.0 - a);
    let norm = (kf - 1.0).exp2() - kf - 1.0; // 2^{k-1} - k - 1

    let (alpha_xi, psi_rb) = if xi <= 0.0 {
        (f64::NAN, 0.0)
    } else {
        let a_rb = overlap
            .a_rb
            .ok_or_else(|| Error::domain("alpha_rb must be defined when g_rb > gamma"))?;
        let alpha_xi = (fr.g_rb * a_rb - fr.gamma * a_gamma) / xi;
        let v = -xi * checked_ln(norm, "psi_rb")?
            + xi * (alpha_xi * checked_ln(q1, "psi_rb")?
                + (1.0 - alpha_xi) * checked_ln(q0, "psi_rb")?);
        (alpha_xi, v)
    };

    let (alpha_zeta, psi_br) = if zeta <= 0.0 {
        (f64::NAN, 0.0)
    } else {
        let a_br = overlap
            .a_br
            .ok_or_else(|| Error::domain("alpha_br must be defined when g_br > gamma"))?;
        let alpha_zeta = (fr.g_br * a_br - fr.gamma * a_gamma) / zeta;
        let v = zeta
            * (alpha_zeta * checked_ln(q1, "psi_br")?
                + (1.0 - alpha_zeta) * checked_ln(q0, "psi_br")?);
        (alpha_zeta, v)
    };

    let eta_a = eta_poly(k, a);
    // Joint good probability: 1 - 2*(k+1)2^{1-k} + 2^{1-k} eta(a).
    let joint_good = 1.0 - (kf + 1.0) * (2.0 - kf).exp2() + two1mk * eta_a;
    let bb_clauses = r - 2.0 * lambda + fr.g_rr;
    let psi_bb = bb_clauses * (checked_ln(joint_good, "psi_bb")? - checked_ln(noncrit, "psi_bb")?);

    let total = psi_sigma + psi_gamma + psi_rr + psi_rb + psi_br + psi_bb;
    Ok(PsiBreakdown {
        psi_sigma,
        psi_rr,
        psi_gamma,
        psi_rb,
        psi_br,
        psi_bb,
        xi,
        alpha_xi,
        zeta,
        alpha_zeta,
        eta_a,
        total,
    })
}

/// The five printed tameness tolerances: components of the overlap vector
/// must sit within (10/sqrt(k), 2^{-k/3}, 2^{-k/3}, 2^{-k/2}, 100/k) of
/// the pair's agreement fraction alpha. Undefined components (empty
/// classes) are vacuously tame.
pub fn tame_check(overlap: &OverlapVector, alpha: f64, k: u32) -> bool {
    let kf = k as f64;
    let ok = |v: Option<f64>, tol: f64| v.map_or(true, |x| (x - alpha).abs() <= tol);
    ok(overlap.a_rr, 10.0 / kf.sqrt())
        && ok(overlap.a_rb, (-kf / 3.0).exp2())
        && ok(overlap.a_br, (-kf / 3.0).exp2())
        && ok(overlap.a_bb, (-kf / 2.0).exp2())
        && ok(overlap.a_gamma, 100.0 / kf)
}

/// Deviations delta = alpha_vector - 1/2 entering the Taylor remainder
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaVector {
    pub d_rr: f64,
    pub d_rb: f64,
    pub d_br: f64,
    pub d_bb: f64,
    pub d_gamma: f64,
}

/// The two implied constants of the Taylor remainder bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorConstants {
    pub c1: f64,
    pub c2: f64,
}

/// Remainder bound
/// c1 k [g_rr (d_rr d_bb + d_bb^2) + gamma (d_gamma d_bb + d_bb^2)]
/// + c2 (k^4/2^k) [d_rb d_bb + d_br d_bb + d_bb^2].
pub fn taylor_bound(
    params: &RateParams,
    fr: &ProfileFractions,
    delta: &DeltaVector,
    c: &TaylorConstants,
) -> f64 {
    let kf = params.k as f64;
    let group1 = fr.g_rr * (delta.d_rr * delta.d_bb + delta.d_bb * delta.d_bb)
        + fr.gamma * (delta.d_gamma * delta.d_bb + delta.d_bb * delta.d_bb);
    let group2 =
        delta.d_rb * delta.d_bb + delta.d_br * delta.d_bb + delta.d_bb * delta.d_bb;
    c.c1 * kf * group1 + c.c2 * kf.powi(4) * (-kf).exp2() * group2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical(k: u32) -> (RateParams, ProfileFractions, OverlapVector) {
        let kf = k as f64;
        let ln2 = std::f64::consts::LN_2;
        let r = (kf - 1.0).exp2() * ln2 - ln2 / 2.0 - 0.25 - 0.2;
        let params = RateParams::new(k, r).unwrap();
        let g_rr = kf * (-kf).exp2();
        let gamma = kf * kf * (-kf).exp2();
        let g_rb = params.lambda - g_rr;
        let fr = ProfileFractions {
            g_rr,
            g_rb,
            g_br: g_rb,
            g_bb: kf * params.r - 2.0 * params.lambda + g_rr,
            gamma,
        };
        let ov = OverlapVector {
            a_rr: Some(0.5),
            a_rb: Some(0.5),
            a_br: Some(0.5),
            a_bb: Some(0.5),
            a_gamma: Some(0.5),
        };
        (params, fr, ov)
    }

    #[test]
    fn gamma_zero_kills_psi_gamma() {
        let (params, mut fr, ov) = canonical(10);
        fr.gamma = 0.0;
        let b = psi_breakdown(&params, &fr, &ov).unwrap();
        assert_eq!(b.psi_gamma, 0.0);
    }

    #[test]
    fn psi_rr_at_half_ignores_alpha_rr() {
        let (params, fr, mut ov) = canonical(10);
        let b1 = psi_breakdown(&params, &fr, &ov).unwrap();
        ov.a_rr = Some(0.9);
        let b2 = psi_breakdown(&params, &fr, &ov).unwrap();
        assert!((b1.psi_rr - b2.psi_rr).abs() < 1e-15);
        let expect = fr.g_rr * 9.0 * 0.5f64.ln();
        assert!((b1.psi_rr - expect).abs() < 1e-15);
    }

    #[test]
    fn totals_add_up() {
        let (params, fr, ov) = canonical(12);
        let b = psi_breakdown(&params, &fr, &ov).unwrap();
        let s = b.psi_sigma + b.psi_gamma + b.psi_rr + b.psi_rb + b.psi_br + b.psi_bb;
        assert!((b.total - s).abs() < 1e-15);
    }

    #[test]
    fn alpha_xi_is_half_at_symmetric_point() {
        let (params, fr, ov) = canonical(12);
        let b = psi_breakdown(&params, &fr, &ov).unwrap();
        assert!((b.alpha_xi - 0.5).abs() < 1e-12);
        assert!((b.alpha_zeta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tame_trivial_cases() {
        let ov = OverlapVector {
            a_rr: Some(0.4),
            a_rb: Some(0.4),
            a_br: Some(0.4),
            a_bb: Some(0.4),
            a_gamma: Some(0.4),
        };
        assert!(tame_check(&ov, 0.4, 12));
        let mut far = ov;
        far.a_bb = Some(0.4 + 0.1);
        assert!(!tame_check(&far, 0.4, 12));
    }

    #[test]
    fn taylor_zero_delta() {
        let (params, fr, _) = canonical(10);
        let d = DeltaVector { d_rr: 0.0, d_rb: 0.0, d_br: 0.0, d_bb: 0.0, d_gamma: 0.0 };
        let c = TaylorConstants { c1: 1.0, c2: 1.0 };
        assert_eq!(taylor_bound(&params, &fr, &d, &c), 0.0);
    }

    #[test]
    fn domain_errors() {
        let (params, fr, mut ov) = canonical(10);
        ov.a_bb = Some(1.5);
        assert!(psi_breakdown(&params, &fr, &ov).is_err());
        let (params3, _, _) = canonical(10);
        let mut bad = fr;
        bad.g_rb = 0.0;
        bad.gamma = 0.1;
        assert!(psi_breakdown(&params3, &bad, &OverlapVector::all(0.5)).is_err());
    }
}
