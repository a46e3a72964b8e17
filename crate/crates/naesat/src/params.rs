//! Analytic parameter bundle shared by the rate functions and the
//! instance-level classifiers.

use serde::{Deserialize, Serialize};

/// Parameters derived from the clause width `k` and the clause density `r`.
///
/// * `rho` = 2^{k-1} ln2 − r measures the distance of `r` below the
///   first-moment scale.
/// * `lambda` = k r / (2^{k-1} − 1) is the mean number of clauses supported
///   by a variable (equivalently, the critical-clause density per variable).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    pub k: u32,
    pub r: f64,
    pub rho: f64,
    pub lambda: f64,
}

impl RateParams {
    /// Build from clause width and density. Requires `k >= 3` and `r > 0`.
    pub fn new(k: u32, r: f64) -> crate::Result<Self> {
        if k < 3 {
            return Err(crate::Error::domain(format!("k must be >= 3, got {k}")));
        }
        if !(r > 0.0) {
            return Err(crate::Error::domain(format!("r must be positive, got {r}")));
        }
        let pow = (k as f64 - 1.0).exp2();
        Ok(RateParams {
            k,
            r,
            rho: pow * std::f64::consts::LN_2 - r,
            lambda: k as f64 * r / (pow - 1.0),
        })
    }

    /// Build from clause width and `rho` (distance below 2^{k-1} ln 2).
    pub fn from_rho(k: u32, rho: f64) -> crate::Result<Self> {
        let pow = (k as f64 - 1.0).exp2();
        Self::new(k, pow * std::f64::consts::LN_2 - rho)
    }

    /// Density inferred from an instance (`r = m/n`), the preferred way to
    /// analyze sampled formulas so that ceil-rounding of `m` never drifts.
    pub fn from_instance(k: u32, n: usize, m: usize) -> crate::Result<Self> {
        if n == 0 {
            return Err(crate::Error::domain("n must be positive"));
        }
        Self::new(k, m as f64 / n as f64)
    }

    /// e^{-lambda}, the fraction-of-free-variables scale.
    pub fn exp_neg_lambda(&self) -> f64 {
        (-self.lambda).exp()
    }

    /// The expected number of free variables per variable, (1-beta)e^{-lambda}
    /// evaluated at beta = 0.
    pub fn free_scale(&self, n: usize) -> f64 {
        self.exp_neg_lambda() * n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_fields() {
        let p = RateParams::new(4, 2.5).unwrap();
        assert!((p.rho - (8.0 * std::f64::consts::LN_2 - 2.5)).abs() < 1e-15);
        assert!((p.lambda - 10.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn rho_roundtrip() {
        let p = RateParams::from_rho(10, 0.5).unwrap();
        let q = RateParams::new(10, p.r).unwrap();
        assert!((p.rho - q.rho).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_k() {
        assert!(RateParams::new(2, 1.0).is_err());
    }
}
