//! Pure-loss channel analytics in shot-noise units.
//!
//! All quadrature variances are in units of the vacuum variance, so a
//! coherent state `|alpha>` has position mean `2 Re(alpha)` and variance 1.
//! Alice's position label is therefore `2 Re(alpha_x)`, whose variance over
//! the constellation is `2 N_S`.

use num_complex::Complex64;

use crate::constellation::Constellation;
use crate::error::{domain, Result};
use crate::quad;

/// Half-width, in standard deviations, of the integration window kept
/// around each mixture component.
const WINDOW_SIGMAS: f64 = 9.0;
const ENTROPY_TOL: f64 = 1e-10;
const MAX_SEGMENTS: usize = 20_000;

/// Beamsplitter channel of transmissivity `eta` with a vacuum environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureLossChannel {
    eta: f64,
}

impl PureLossChannel {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(domain(format!(
                "transmissivity must lie in (0, 1], got {eta}"
            )));
        }
        Ok(Self { eta })
    }

    /// Channel with the given loss in dB, `eta = 10^(-loss_db / 10)`.
    pub fn from_loss_db(loss_db: f64) -> Result<Self> {
        if !(loss_db >= 0.0 && loss_db.is_finite()) {
            return Err(domain(format!(
                "loss must be a non-negative number of dB, got {loss_db}"
            )));
        }
        Self::new(10f64.powf(-loss_db / 10.0))
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Distribution of Bob's position homodyne outcome for input `|alpha>`.
    pub fn conditional_output(&self, alpha: Complex64) -> GaussianDensity {
        GaussianDensity {
            mean: self.eta.sqrt() * 2.0 * alpha.re,
            variance: 1.0,
        }
    }

    /// Exact second- and fourth-order statistics of `(Q_A, Q_B)` for the
    /// discrete constellation, summed over the position marginal.
    pub fn analytic_stats(&self, c: &Constellation) -> CovarianceStats {
        let labels = c.snu_labels();
        let weights = c.marginal();
        let mean: f64 = labels.iter().zip(weights).map(|(x, w)| w * x).sum();
        let (mut v2, mut v4) = (0.0, 0.0);
        for (x, w) in labels.iter().zip(weights) {
            let d2 = (x - mean).powi(2);
            v2 += w * d2;
            v4 += w * d2 * d2;
        }
        CovarianceStats::from_label_moments(self.eta, v2, v4)
    }

    /// The same statistics for a Gaussian-modulated input of mean photon
    /// number `n_s`.
    pub fn gaussian_stats(&self, n_s: f64) -> CovarianceStats {
        let v2 = 2.0 * n_s;
        CovarianceStats::from_label_moments(self.eta, v2, 3.0 * v2 * v2)
    }

    /// Shannon information `I(X;Y)` in bits between the constellation point
    /// and Bob's position homodyne outcome.
    ///
    /// `Y` depends on `x` only through `Re(alpha_x)`, so the output is the
    /// `m`-component mixture over the position marginal and
    /// `I = h(Y) - log2(2 pi e) / 2`.
    pub fn mutual_information(&self, c: &Constellation) -> Result<f64> {
        if c.m() < 2 {
            return Ok(0.0);
        }
        let gain = self.eta.sqrt();
        let means: Vec<f64> = c.snu_labels().iter().map(|x| gain * x).collect();
        let weights = c.marginal();
        let norm = (2.0 * std::f64::consts::PI).sqrt().recip();

        let density = |y: f64| -> f64 {
            means
                .iter()
                .zip(weights)
                .map(|(mu, w)| w * (-0.5 * (y - mu).powi(2)).exp())
                .sum::<f64>()
                * norm
        };
        let integrand = |y: f64| {
            let p = density(y);
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        };

        let runs = window_breaks(&means);
        let tol = ENTROPY_TOL / runs.len() as f64;
        let mut h_y = 0.0;
        for run in &runs {
            h_y += quad::integrate(integrand, run, tol, MAX_SEGMENTS)?;
        }
        let h_noise = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).log2();
        Ok((h_y - h_noise).max(0.0))
    }

    /// `log2(1 + 2 eta N_S) / 2`, the Gaussian-modulation value.
    pub fn mutual_information_gaussian(&self, n_s: f64) -> f64 {
        0.5 * (2.0 * self.eta * n_s).ln_1p() / std::f64::consts::LN_2
    }
}

/// Unit-spaced breakpoints covering each connected piece of the union of
/// `mean +- WINDOW_SIGMAS`, one run per piece.
fn window_breaks(means: &[f64]) -> Vec<Vec<f64>> {
    let mut windows: Vec<(f64, f64)> = means
        .iter()
        .map(|m| (m - WINDOW_SIGMAS, m + WINDOW_SIGMAS))
        .collect();
    windows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in windows {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
        .into_iter()
        .map(|(lo, hi)| {
            let pieces = (hi - lo).ceil().max(1.0) as usize;
            let mut run: Vec<f64> = (0..pieces)
                .map(|k| lo + (hi - lo) * k as f64 / pieces as f64)
                .collect();
            run.push(hi);
            run
        })
        .collect()
}

/// Normal density parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDensity {
    pub mean: f64,
    pub variance: f64,
}

/// Covariance parameters `(gamma_11, gamma_12, gamma_22)` and the fourth
/// moments that size the Gaussian-protocol intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceStats {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    /// `E[(Q_B - E Q_B)^4]`
    pub m4_b: f64,
    /// `E[(Q_A - E Q_A)^2 (Q_B - E Q_B)^2]`
    pub m22_ab: f64,
}

impl CovarianceStats {
    /// Builds the statistics of `Q_B = sqrt(eta) Q_A + N(0, 1)` from the
    /// central moments `v2`, `v4` of Alice's label.
    fn from_label_moments(eta: f64, v2: f64, v4: f64) -> Self {
        Self {
            g11: v2,
            g12: eta.sqrt() * v2,
            g22: eta * v2 + 1.0,
            m4_b: eta * eta * v4 + 6.0 * eta * v2 + 3.0,
            m22_ab: eta * v4 + v2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_transmissivity() {
        assert!(PureLossChannel::new(0.0).is_err());
        assert!(PureLossChannel::new(1.5).is_err());
        assert!(PureLossChannel::new(f64::NAN).is_err());
        assert!(PureLossChannel::from_loss_db(-1.0).is_err());
    }

    #[test]
    fn loss_in_db() {
        let ch = PureLossChannel::from_loss_db(10.0).unwrap();
        assert_abs_diff_eq!(ch.eta(), 0.1, epsilon = 1e-15);
        assert_eq!(PureLossChannel::from_loss_db(0.0).unwrap().eta(), 1.0);
    }

    #[test]
    fn conditional_output_examples() {
        let id = PureLossChannel::new(1.0).unwrap();
        assert_eq!(
            id.conditional_output(Complex64::new(0.0, 0.0)),
            GaussianDensity {
                mean: 0.0,
                variance: 1.0
            }
        );
        let half = PureLossChannel::new(0.5).unwrap();
        // label 2 Re(alpha) = 2
        let out = half.conditional_output(Complex64::new(1.0, 0.7));
        assert_abs_diff_eq!(out.mean, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(out.variance, 1.0);
        let lossy = PureLossChannel::new(1e-12).unwrap();
        assert!(
            lossy
                .conditional_output(Complex64::new(3.0, 0.0))
                .mean
                .abs()
                < 1e-5
        );
    }

    #[test]
    fn stats_at_half_transmissivity() {
        let ch = PureLossChannel::new(0.5).unwrap();
        for m in [2, 5, 12] {
            let s = ch.analytic_stats(&Constellation::new(m, 1.0).unwrap());
            assert_abs_diff_eq!(s.g11, 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.g22, 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.g12, 2f64.sqrt(), epsilon = 1e-12);
            assert!(s.g12 * s.g12 <= s.g11 * s.g22 + 1e-12);
            assert!(s.m4_b >= s.g22 * s.g22);
        }
        // the fourth moment is matched once m >= 3
        let s = ch.analytic_stats(&Constellation::new(40, 1.0).unwrap());
        assert_abs_diff_eq!(s.m4_b, 12.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ch.gaussian_stats(1.0).m4_b, 12.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_stats() {
        let ch = PureLossChannel::new(1.0).unwrap();
        let s = ch.analytic_stats(&Constellation::new(1, 1.0).unwrap());
        assert_eq!((s.g11, s.g12, s.g22), (0.0, 0.0, 1.0));
        assert_eq!(s.m4_b, 3.0);
    }

    #[test]
    fn gaussian_information_closed_forms() {
        let half = PureLossChannel::new(0.5).unwrap();
        assert_abs_diff_eq!(half.mutual_information_gaussian(1.0), 0.5, epsilon = 1e-15);
        assert!(half.mutual_information_gaussian(1e-12) < 1e-11);
        let id = PureLossChannel::new(1.0).unwrap();
        assert_abs_diff_eq!(id.mutual_information_gaussian(1.5), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn information_degenerate_cases() {
        let ch = PureLossChannel::new(0.7).unwrap();
        assert_eq!(
            ch.mutual_information(&Constellation::new(1, 3.0).unwrap())
                .unwrap(),
            0.0
        );
        let dark = PureLossChannel::new(1e-12).unwrap();
        let c = Constellation::new(8, 1.0).unwrap();
        assert!(dark.mutual_information(&c).unwrap() < 1e-9);
    }

    #[test]
    fn binary_input_information_matches_direct_formula() {
        // m = 2: equiprobable +-a through unit-variance noise; compare with a
        // plain Riemann sum on a fine grid
        let ch = PureLossChannel::new(0.8).unwrap();
        let c = Constellation::new(2, 0.6).unwrap();
        let a = 0.8f64.sqrt() * (2.0 * 0.6f64).sqrt();
        let phi = |y: f64| (-0.5 * y * y).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut h = 0.0;
        let dy = 1e-4;
        let mut y = -15.0;
        while y < 15.0 {
            let p = 0.5 * (phi(y - a) + phi(y + a));
            h -= p * p.log2() * dy;
            y += dy;
        }
        let expected = h - 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).log2();
        assert_abs_diff_eq!(ch.mutual_information(&c).unwrap(), expected, epsilon = 1e-8);
    }

    #[test]
    fn disjoint_windows_are_covered_separately() {
        let runs = window_breaks(&[-30.0, 30.0, 31.0]);
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].first().copied(), Some(-39.0));
        assert_eq!(runs[0].last().copied(), Some(-21.0));
        assert_eq!(runs[1].first().copied(), Some(21.0));
        assert_eq!(runs[1].last().copied(), Some(40.0));
    }
}
