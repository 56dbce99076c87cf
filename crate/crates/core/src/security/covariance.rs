//! Entanglement-based covariance bounds and the Gaussian Holevo bound for
//! reverse reconciliation with position homodyne detection.

use crate::channel::CovarianceStats;
use crate::constellation::ApproxError;
use crate::error::{domain, Error, Result};

use super::entropy::snu_entropy;

const PHYSICAL_TOL: f64 = 1e-6;
const DISCRIMINANT_TOL: f64 = 1e-9;

/// Two-mode covariance `[[a I, c Z], [c Z, b I]]` in shot-noise units, with
/// `Z = diag(1, -1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EBCovariance {
    /// Reference-mode variance.
    pub a: f64,
    /// Bob's mode variance.
    pub b: f64,
    /// Position-position correlation.
    pub c: f64,
    /// Rotation of the correlation block; every bound here uses 0.
    pub theta: f64,
}

impl EBCovariance {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self {
            a,
            b,
            c,
            theta: 0.0,
        }
    }

    /// Two-mode squeezed vacuum of variance `v` sent through a pure-loss
    /// channel of transmissivity `eta`.
    pub fn pure_loss(v: f64, eta: f64) -> Self {
        Self::new(v, eta * v + 1.0 - eta, (eta * (v * v - 1.0)).sqrt())
    }

    /// Largest correlation `c` for which `(a, b, c)` is a valid quantum
    /// covariance: `c^2 <= ab - 1 - |a - b|`.
    pub fn max_physical_c(a: f64, b: f64) -> f64 {
        (a * b - 1.0 - (a - b).abs()).max(0.0).sqrt()
    }

    /// Symplectic eigenvalues `(nu_1, nu_2)` with `nu_1 >= nu_2 >= 1`.
    pub fn symplectic_eigs(&self) -> Result<(f64, f64)> {
        let Self { a, b, c, .. } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::UnphysicalCovariance(format!(
                "non-finite entry in ({a}, {b}, {c})"
            )));
        }
        let delta = a * a + b * b - 2.0 * c * c;
        // delta^2 - 4 det = (a - b)^2 ((a + b)^2 - 4 c^2)
        let disc = (a - b).powi(2) * ((a + b).powi(2) - 4.0 * c * c);
        if disc < -DISCRIMINANT_TOL {
            return Err(Error::UnphysicalCovariance(format!(
                "negative discriminant {disc:e} for ({a}, {b}, {c})"
            )));
        }
        let nu1_sq = 0.5 * (delta + disc.max(0.0).sqrt());
        if !(nu1_sq > 0.0) {
            return Err(Error::UnphysicalCovariance(format!(
                "degenerate covariance ({a}, {b}, {c})"
            )));
        }
        let nu1 = nu1_sq.sqrt();
        let nu2 = (a * b - c * c).abs() / nu1;
        if nu2 < 1.0 - PHYSICAL_TOL {
            return Err(Error::UnphysicalCovariance(format!(
                "symplectic eigenvalue {nu2} below the vacuum for ({a}, {b}, {c})"
            )));
        }
        Ok((nu1.max(1.0), nu2.max(1.0)))
    }

    /// Symplectic eigenvalue of the reference mode after Bob measures the
    /// position of his mode: `sqrt(a (a - c^2 / b))`.
    pub fn conditional_eig(&self) -> Result<f64> {
        if !(self.b > 0.0) {
            return Err(domain(format!(
                "Bob's variance must be positive, got {}",
                self.b
            )));
        }
        let det = self.a * (self.a - self.c * self.c / self.b);
        if det < 0.0 {
            return Err(Error::UnphysicalCovariance(format!(
                "conditional covariance has negative determinant {det:e}"
            )));
        }
        Ok(det.sqrt().max(1.0))
    }

    /// Eve's Holevo information about Bob's homodyne outcome in bits,
    /// `S(nu_1) + S(nu_2) - S(nu_3)`.
    pub fn holevo_bound(&self) -> Result<f64> {
        let (nu1, nu2) = self.symplectic_eigs()?;
        let nu3 = self.conditional_eig()?;
        Ok((snu_entropy(nu1) + snu_entropy(nu2) - snu_entropy(nu3)).max(0.0))
    }
}

/// Half-widths `(eps1, eps2)` of the intervals containing the Gaussian
/// protocol's `gamma_22` and `gamma_12`.
pub fn interval_half_widths(
    err: &ApproxError,
    stats: &CovarianceStats,
    c1: f64,
    c2: f64,
) -> (f64, f64) {
    (
        err.eps_prop * (1.0 + c1) * stats.m4_b.sqrt(),
        err.eps_prop * (1.0 + c2) * stats.m22_ab.sqrt(),
    )
}

/// Worst-case entanglement-based covariance consistent with the observed
/// statistics: the largest Bob variance and the smallest correlation in the
/// intervals.
///
/// If the interval end point is not a physical state the correlation is
/// lowered to the largest physical value, which can only raise the Holevo
/// bound.
pub fn pm_to_eb(stats: &CovarianceStats, eps1: f64, eps2: f64) -> Result<EBCovariance> {
    if !(stats.g11 > 0.0) {
        return Err(domain(format!(
            "gamma_11 must be positive, got {}",
            stats.g11
        )));
    }
    let correlation = stats.g12 - eps2;
    if correlation <= 0.0 {
        return Err(Error::NoKeyPossible(format!(
            "correlation {} does not exceed its uncertainty {eps2}",
            stats.g12
        )));
    }
    let a = stats.g11 + 1.0;
    let b = stats.g22 + eps1;
    let c = ((stats.g11 + 2.0) / stats.g11).sqrt() * correlation;
    Ok(EBCovariance::new(
        a,
        b,
        c.min(EBCovariance::max_physical_c(a, b)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn stats(g11: f64, g12: f64, g22: f64) -> CovarianceStats {
        CovarianceStats {
            g11,
            g12,
            g22,
            m4_b: 3.0 * g22 * g22,
            m22_ab: g11 * g22,
        }
    }

    #[test]
    fn symplectic_examples() {
        let (n1, n2) = EBCovariance::new(1.0, 1.0, 0.0).symplectic_eigs().unwrap();
        assert_eq!((n1, n2), (1.0, 1.0));

        let tmsv = EBCovariance::new(3.0, 3.0, 8f64.sqrt());
        let (n1, n2) = tmsv.symplectic_eigs().unwrap();
        assert_abs_diff_eq!(n1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-12);

        let (n1, n2) = EBCovariance::new(3.0, 2.0, 2.0).symplectic_eigs().unwrap();
        assert_abs_diff_eq!(n1, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_unphysical_correlation() {
        let r = EBCovariance::new(3.0, 2.0, 2.5).symplectic_eigs();
        assert!(matches!(r, Err(Error::UnphysicalCovariance(_))));
    }

    #[test]
    fn holevo_examples() {
        assert_eq!(
            EBCovariance::new(1.0, 1.0, 0.0).holevo_bound().unwrap(),
            0.0
        );
        let lossless = EBCovariance::new(3.0, 3.0, 8f64.sqrt());
        assert_abs_diff_eq!(lossless.conditional_eig().unwrap(), 1.0, epsilon = 1e-12);
        assert!(lossless.holevo_bound().unwrap() < 1e-10);
        let half = EBCovariance::new(3.0, 2.0, 2.0).holevo_bound().unwrap();
        assert!(half > 0.0 && half < 1.0);
    }

    #[test]
    fn pure_loss_sits_on_the_physical_boundary() {
        let cov = EBCovariance::pure_loss(5.0, 0.3);
        assert_abs_diff_eq!(
            cov.c,
            EBCovariance::max_physical_c(cov.a, cov.b),
            epsilon = 1e-12
        );
    }

    #[test]
    fn interval_half_width_examples() {
        let s = stats(2.0, 2f64.sqrt(), 2.0);
        let zero = ApproxError {
            chi2: 0.0,
            tau: 0.0,
            eps_td: 0.0,
            eps_prop: 0.0,
        };
        assert_eq!(interval_half_widths(&zero, &s, 100.0, 100.0), (0.0, 0.0));
        let small = ApproxError {
            eps_prop: 0.01,
            ..zero
        };
        let s12 = CovarianceStats { m4_b: 12.0, ..s };
        let (e1, _) = interval_half_widths(&small, &s12, 100.0, 100.0);
        assert_abs_diff_eq!(e1, 0.01 * 101.0 * 12f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(e1, 3.4987, epsilon = 1e-4);
    }

    #[test]
    fn pm_to_eb_examples() {
        let eb = pm_to_eb(&stats(2.0, 2f64.sqrt(), 2.0), 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(eb.a, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eb.b, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eb.c, 2.0, epsilon = 1e-12);
        assert_eq!(eb.theta, 0.0);

        let eb = pm_to_eb(&stats(2.0, 2.0, 3.0), 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(eb.c, 8f64.sqrt(), epsilon = 1e-12);
        let (n1, n2) = eb.symplectic_eigs().unwrap();
        assert_abs_diff_eq!(n1, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-7);

        let r = pm_to_eb(&stats(2.0, 0.1, 2.0), 0.0, 0.2);
        assert!(matches!(r, Err(Error::NoKeyPossible(_))));
    }

    #[test]
    fn clamp_only_lowers_correlation() {
        // an inflated correlation is brought back to the physical boundary
        let eb = pm_to_eb(&stats(2.0, 5.0, 2.0), 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            eb.c,
            EBCovariance::max_physical_c(3.0, 2.0),
            epsilon = 1e-15
        );
        assert!(eb.holevo_bound().is_ok());
    }
}
