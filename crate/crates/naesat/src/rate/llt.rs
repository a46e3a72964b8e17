//! Saddle-point local limit theorem for sums of i.i.d. lattice variables,
//! plus Stirling-type binomial asymptotics.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

/// A probability generating function P(z) = sum_j p_j z^j, either a named
/// family or an explicit finite coefficient sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Pgf {
    Poisson { lambda: f64 },
    Binomial { n: u64, p: f64 },
    /// Poisson conditioned on being >= 1: P(z) = (e^{lambda z} - 1)/(e^lambda - 1).
    ZeroTruncatedPoisson { lambda: f64 },
    /// Explicit pmf on {0, 1, ..., len-1}.
    Finite { coeffs: Vec<f64> },
}

impl Pgf {
    /// ln P(z) for z > 0.
    pub fn ln_p(&self, z: f64) -> f64 {
        match self {
            Pgf::Poisson { lambda } => lambda * (z - 1.0),
            Pgf::Binomial { n, p } => *n as f64 * (p * (z - 1.0)).ln_1p(),
            Pgf::ZeroTruncatedPoisson { lambda } => {
                ((lambda * z).exp_m1()).ln() - (lambda.exp_m1()).ln()
            }
            Pgf::Finite { coeffs } => {
                // Horner in log space is unnecessary at desk scale.
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c * z.powi(j as i32))
                    .sum::<f64>()
                    .ln()
            }
        }
    }

    /// The tilt map alpha(z) = z P'(z)/P(z), strictly increasing on (0, inf)
    /// for aperiodic supports.
    pub fn tilt(&self, z: f64) -> f64 {
        match self {
            Pgf::Poisson { lambda } => lambda * z,
            Pgf::Binomial { n, p } => {
                let q = 1.0 - p;
                *n as f64 * p * z / (q + p * z)
            }
            Pgf::ZeroTruncatedPoisson { lambda } => {
                let lz = lambda * z;
                lz * lz.exp() / lz.exp_m1()
            }
            Pgf::Finite { coeffs } => {
                let p: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c * z.powi(j as i32))
                    .sum();
                let zp: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| j as f64 * c * z.powi(j as i32))
                    .sum();
                zp / p
            }
        }
    }

    /// xi(z) = d^2/dz^2 [ln P(z) - alpha ln z] evaluated with alpha = tilt(z):
    /// P''/P - (P'/P)^2 + alpha/z^2. At z = 1 this is the variance.
    pub fn curvature(&self, z: f64) -> f64 {
        let alpha = self.tilt(z);
        let (d1, d2) = match self {
            Pgf::Poisson { lambda } => (*lambda, lambda * lambda),
            Pgf::Binomial { n, p } => {
                let q = 1.0 - p;
                let nf = *n as f64;
                let d1 = nf * p / (q + p * z);
                let d2 = nf * (nf - 1.0) * p * p / ((q + p * z) * (q + p * z));
                (d1, d2)
            }
            Pgf::ZeroTruncatedPoisson { lambda } => {
                let e = (lambda * z).exp();
                let p = ((lambda * z).exp_m1()) / lambda.exp_m1();
                let d1 = lambda * e / lambda.exp_m1() / p;
                let d2 = lambda * lambda * e / lambda.exp_m1() / p;
                (d1, d2)
            }
            Pgf::Finite { coeffs } => {
                let p: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c * z.powi(j as i32))
                    .sum();
                let p1: f64 = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, &c)| j as f64 * c * z.powi(j as i32 - 1))
                    .sum();
                let p2: f64 = coeffs
                    .iter()
                    .enumerate()
                    .skip(2)
                    .map(|(j, &c)| (j * (j - 1)) as f64 * c * z.powi(j as i32 - 2))
                    .sum();
                (p1 / p, p2 / p)
            }
        };
        d2 - d1 * d1 + alpha / (z * z)
    }

    /// Lower tilt limit T_0 = lim_{z->0} z P'/P (the minimum of the support).
    pub fn t0(&self) -> f64 {
        match self {
            Pgf::Poisson { .. } | Pgf::Binomial { .. } => 0.0,
            Pgf::ZeroTruncatedPoisson { .. } => 1.0,
            Pgf::Finite { coeffs } => coeffs
                .iter()
                .position(|&c| c > 0.0)
                .map(|j| j as f64)
                .unwrap_or(0.0),
        }
    }

    /// Upper tilt limit T_inf = lim_{z->inf} z P'/P.
    pub fn t_inf(&self) -> f64 {
        match self {
            Pgf::Poisson { .. } | Pgf::ZeroTruncatedPoisson { .. } => f64::INFINITY,
            Pgf::Binomial { n, .. } => *n as f64,
            Pgf::Finite { coeffs } => coeffs
                .iter()
                .rposition(|&c| c > 0.0)
                .map(|j| j as f64)
                .unwrap_or(0.0),
        }
    }

    /// Mean and variance of the underlying distribution.
    pub fn mean(&self) -> f64 {
        self.tilt(1.0)
    }

    pub fn variance(&self) -> f64 {
        self.curvature(1.0)
    }

    /// The support is aperiodic iff the gcd of its gaps is 1 (named
    /// families always are; explicit coefficients are checked).
    pub fn is_aperiodic(&self) -> bool {
        match self {
            Pgf::Finite { coeffs } => {
                let support: Vec<usize> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0.0)
                    .map(|(j, _)| j)
                    .collect();
                if support.len() < 2 {
                    return false;
                }
                let base = support[0];
                let g = support[1..]
                    .iter()
                    .fold(0usize, |g, &s| gcd(g, s - base));
                g == 1
            }
            _ => true,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Pgf::Poisson { lambda } | Pgf::ZeroTruncatedPoisson { lambda } => *lambda > 0.0,
            Pgf::Binomial { n, p } => *n > 0 && *p > 0.0 && *p < 1.0,
            Pgf::Finite { coeffs } => {
                coeffs.iter().all(|&c| c >= 0.0)
                    && ((coeffs.iter().sum::<f64>()) - 1.0).abs() < 1e-9
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("invalid PGF parameters"))
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solve zeta P'(zeta)/P(zeta) = alpha and return (zeta, xi) with xi the
/// curvature of ln P(z) - alpha ln z at zeta. Requires alpha strictly
/// between the tilt limits and an aperiodic support.
pub fn saddle_point(pgf: &Pgf, alpha: f64) -> Result<(f64, f64)> {
    pgf.validate()?;
    if !pgf.is_aperiodic() {
        return Err(Error::domain("PGF support is periodic; the lattice local limit does not apply"));
    }
    if !(alpha > pgf.t0() && alpha < pgf.t_inf()) {
        return Err(Error::domain(format!(
            "alpha = {alpha} outside the tilt range ({}, {})",
            pgf.t0(),
            pgf.t_inf()
        )));
    }
    // Bracket: tilt is strictly increasing; expand around z = 1.
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while pgf.tilt(lo) >= alpha {
        lo /= 2.0;
        if lo < 1e-300 {
            return Err(Error::domain("failed to bracket the saddle point from below"));
        }
    }
    while pgf.tilt(hi) <= alpha {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::domain("failed to bracket the saddle point from above"));
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-15 * mid {
            break;
        }
        if pgf.tilt(mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let zeta = 0.5 * (lo + hi);
    Ok((zeta, pgf.curvature(zeta)))
}

/// Local limit estimate of Pr[X_1 + ... + X_n = alpha n]:
/// (P(zeta)/zeta^alpha)^n / (zeta sqrt(2 pi n xi)).
pub fn local_limit_prob(pgf: &Pgf, n: u64, alpha: f64) -> Result<f64> {
    let (zeta, xi) = saddle_point(pgf, alpha)?;
    let log_term = pgf.ln_p(zeta) - alpha * zeta.ln();
    Ok((n as f64 * log_term).exp() / (zeta * (2.0 * std::f64::consts::PI * n as f64 * xi).sqrt()))
}

/// Central Gaussian form exp(-delta^2 n / 2)/sqrt(2 pi n sigma^2).
///
/// `printed_sigma` reproduces the variant with sigma (not sigma^2) under
/// the root; the variance-consistent form is the default.
pub fn gaussian_local_limit(pgf: &Pgf, n: u64, delta: f64, printed_sigma: bool) -> Result<f64> {
    pgf.validate()?;
    let var = pgf.variance();
    if var <= 0.0 {
        return Err(Error::domain("degenerate distribution"));
    }
    let under_root = if printed_sigma { var.sqrt() } else { var };
    Ok((-delta * delta * n as f64 / 2.0).exp()
        / (2.0 * std::f64::consts::PI * n as f64 * under_root).sqrt())
}

/// Stirling-type binomial asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomAsympt {
    /// H(alpha) N - (1/2) ln(2 pi alpha (1-alpha) N) ~ ln C(N, alpha N).
    pub unshifted: f64,
    /// The same at alpha + eps with the linear correction
    /// eps ln((1-alpha)/alpha) N on the exponent:
    /// (H(alpha) + eps ln((1-alpha)/alpha)) N - (1/2) ln(2 pi f(alpha+eps) N).
    pub shifted: f64,
}

/// Entropy H(x) = -x ln x - (1-x) ln(1-x).
pub fn entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.ln() - (1.0 - x) * (1.0 - x).ln()
    }
}

pub fn binom_asympt(n: u64, alpha: f64, eps: f64) -> Result<BinomAsympt> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::domain("alpha must be in (0, 1/2]"));
    }
    if !(eps.abs() < 0.5) || !(alpha + eps > 0.0 && alpha + eps < 1.0) {
        return Err(Error::domain("eps out of range"));
    }
    let nf = n as f64;
    let var = |x: f64| x * (1.0 - x);
    let unshifted =
        entropy(alpha) * nf - 0.5 * (2.0 * std::f64::consts::PI * var(alpha) * nf).ln();
    let shifted = (entropy(alpha) + eps * ((1.0 - alpha) / alpha).ln()) * nf
        - 0.5 * (2.0 * std::f64::consts::PI * var(alpha + eps) * nf).ln();
    Ok(BinomAsympt { unshifted, shifted })
}

/// Exact ln C(n, t) for oracle comparisons.
pub fn ln_choose(n: u64, t: u64) -> f64 {
    if t > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(t as f64 + 1.0) - ln_gamma((n - t) as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_saddle_closed_form() {
        let pgf = Pgf::Poisson { lambda: 2.0 };
        for alpha in [0.5, 1.0, 2.0, 3.7] {
            let (zeta, _) = saddle_point(&pgf, alpha).unwrap();
            assert!((zeta - alpha / 2.0).abs() < 1e-10, "alpha = {alpha}");
        }
    }

    #[test]
    fn poisson_central_local_limit_vs_exact() {
        // Sum of 200 Poisson(2) = Poisson(400); compare at the mean.
        let pgf = Pgf::Poisson { lambda: 2.0 };
        let est = local_limit_prob(&pgf, 200, 2.0).unwrap();
        let exact = (-400.0f64 + 400.0 * 400.0f64.ln() - ln_gamma(401.0)).exp();
        assert!((est / exact - 1.0).abs() < 0.02, "est {est}, exact {exact}");
    }

    #[test]
    fn binomial_family_consistency() {
        let pgf = Pgf::Binomial { n: 10, p: 0.3 };
        assert!((pgf.mean() - 3.0).abs() < 1e-12);
        assert!((pgf.variance() - 2.1).abs() < 1e-12);
        let (zeta, _) = saddle_point(&pgf, 3.0).unwrap();
        assert!((zeta - 1.0).abs() < 1e-10);
    }

    #[test]
    fn finite_pgf_matches_binomial() {
        // Bin(4, 0.25) as explicit coefficients.
        let p = 0.25f64;
        let coeffs: Vec<f64> = (0..=4)
            .map(|j| {
                (ln_choose(4, j) + j as f64 * p.ln() + (4 - j) as f64 * (1.0 - p).ln()).exp()
            })
            .collect();
        let f = Pgf::Finite { coeffs };
        let b = Pgf::Binomial { n: 4, p };
        for z in [0.3, 1.0, 2.5] {
            assert!((f.ln_p(z) - b.ln_p(z)).abs() < 1e-12);
            assert!((f.tilt(z) - b.tilt(z)).abs() < 1e-12);
            assert!((f.curvature(z) - b.curvature(z)).abs() < 1e-10);
        }
    }

    #[test]
    fn periodic_support_rejected() {
        // Support {0, 2}: period 2.
        let f = Pgf::Finite { coeffs: vec![0.5, 0.0, 0.5] };
        assert!(saddle_point(&f, 1.0).is_err());
    }

    #[test]
    fn zero_truncated_poisson_tilt_floor() {
        let pgf = Pgf::ZeroTruncatedPoisson { lambda: 1.5 };
        assert_eq!(pgf.t0(), 1.0);
        assert!(saddle_point(&pgf, 0.5).is_err());
        let (zeta, _) = saddle_point(&pgf, 2.0).unwrap();
        assert!(zeta > 0.0);
        // tilt(zeta) = 2.
        assert!((pgf.tilt(zeta) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_central_value() {
        let pgf = Pgf::Poisson { lambda: 3.0 };
        let g = gaussian_local_limit(&pgf, 100, 0.0, false).unwrap();
        let expect = 1.0 / (2.0 * std::f64::consts::PI * 100.0 * 3.0).sqrt();
        assert!((g - expect).abs() < 1e-15);
        let printed = gaussian_local_limit(&pgf, 100, 0.0, true).unwrap();
        assert!(printed > g); // sqrt(3) < 3 under the root
    }

    #[test]
    fn binom_asympt_accuracy() {
        let exact = ln_choose(100, 30);
        let est = binom_asympt(100, 0.3, 0.0).unwrap();
        assert!((exact - est.unshifted).abs() <= 0.02);
        assert!((est.shifted - est.unshifted).abs() < 1e-12);
    }

    #[test]
    fn binom_asympt_domain() {
        assert!(binom_asympt(10, 0.6, 0.0).is_err());
        assert!(binom_asympt(10, 0.3, 0.8).is_err());
    }
}
