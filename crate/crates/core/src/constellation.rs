//! The `m x m` Gauss-Hermite coherent-state constellation and its distance
//! to the thermal state it approximates.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::ghquad::GaussHermiteRule;

/// `2 kappa^2` in the chi-square tail of the Gauss-Hermite rule.
pub const TWO_KAPPA_SQ: f64 = 2.36;

/// Coherent-state amplitudes `alpha_x = (q_w + i p_t) / sqrt(2)` on the
/// product grid of scaled Hermite roots, with product probabilities.
///
/// Points are stored row-major in `(w, t)`: index `x = w * m + t`, where `w`
/// indexes the real (position) node and `t` the imaginary (momentum) node.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    m: usize,
    n_s: f64,
    q_values: Vec<f64>,
    marginal: Vec<f64>,
    amplitudes: Vec<Complex64>,
    probs: Vec<f64>,
}

impl Constellation {
    /// Builds the constellation with mean photon number `n_s`.
    pub fn new(m: usize, n_s: f64) -> Result<Self> {
        if !(n_s > 0.0 && n_s.is_finite()) {
            return Err(domain(format!("mean photon number must be > 0, got {n_s}")));
        }
        let rule = GaussHermiteRule::new(m)?;
        let scale = n_s.sqrt();
        let q_values: Vec<f64> = rule.nodes().iter().map(|l| scale * l).collect();
        let marginal = rule.weights().to_vec();

        let mut amplitudes = Vec::with_capacity(m * m);
        let mut probs = Vec::with_capacity(m * m);
        for (q, rq) in q_values.iter().zip(&marginal) {
            for (p, rp) in q_values.iter().zip(&marginal) {
                amplitudes.push(Complex64::new(*q, *p) / std::f64::consts::SQRT_2);
                probs.push(rq * rp);
            }
        }
        Ok(Self {
            m,
            n_s,
            q_values,
            marginal,
            amplitudes,
            probs,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_s(&self) -> f64 {
        self.n_s
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The `m` distinct scaled nodes `sqrt(N_S) l_w`.
    pub fn q_values(&self) -> &[f64] {
        &self.q_values
    }

    /// Probability of each entry of [`q_values`](Self::q_values).
    pub fn marginal(&self) -> &[f64] {
        &self.marginal
    }

    /// Alice's position label `2 Re(alpha)` in shot-noise units for each
    /// marginal node. Its variance is `2 N_S`.
    pub fn snu_labels(&self) -> Vec<f64> {
        self.q_values
            .iter()
            .map(|q| std::f64::consts::SQRT_2 * q)
            .collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.probs)
            .map(|(a, p)| p * a.norm_sqr())
            .sum()
    }
}

/// Approximation-error metrics of the `m x m` constellation against the
/// thermal state of the same mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxError {
    /// Quantum chi-square divergence `tau (2 + tau)`.
    pub chi2: f64,
    /// Classical chi-square of one quadrature after the matched AWGN channel.
    pub tau: f64,
    /// Trace-distance bound `sqrt(chi2) / 2`; this is what the continuity
    /// penalty consumes.
    pub eps_td: f64,
    /// `chi2^(1/4)`, the smallest `eps` with `sqrt(chi2) <= eps^2`; this is
    /// what scales the covariance-parameter intervals.
    pub eps_prop: f64,
}

impl ApproxError {
    pub fn new(m: usize, n_s: f64) -> Result<Self> {
        if m == 0 {
            return Err(domain("constellation size must be positive"));
        }
        if !(n_s > 0.0 && n_s.is_finite()) {
            return Err(domain(format!("mean photon number must be > 0, got {n_s}")));
        }
        // (N_S / sqrt(N_S (1 + N_S)))^(2m) = (N_S / (1 + N_S))^m
        let decay = (m as f64 * (n_s / (1.0 + n_s)).ln()).exp();
        let tau = TWO_KAPPA_SQ * (1.0 + n_s) * decay;
        let chi2 = tau * (2.0 + tau);
        Ok(Self {
            chi2,
            tau,
            eps_td: 0.5 * chi2.sqrt(),
            eps_prop: chi2.sqrt().sqrt(),
        })
    }
}

/// `chi^2(p, q) = sum p^2 / q - 1` for finite distributions on a shared
/// support.
pub fn chi2_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(domain(format!(
            "support sizes differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Err(domain(format!("reference mass is zero at index {i}")));
        }
        total += pi * pi / qi;
    }
    Ok(total - 1.0)
}

/// `chi^2(p1 x p2, q1 x q2)`, evaluated on the explicit product support.
pub fn chi2_product(p1: &[f64], q1: &[f64], p2: &[f64], q2: &[f64]) -> Result<f64> {
    let outer = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect()
    };
    if p1.len() != q1.len() || p2.len() != q2.len() {
        return Err(domain("each factor needs matching supports"));
    }
    chi2_divergence(&outer(p1, p2), &outer(q1, q2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn single_point_constellation() {
        let c = Constellation::new(1, 1.0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.amplitudes()[0], Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(c.probs()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_by_two_constellation() {
        let c = Constellation::new(2, 2.0).unwrap();
        let s2 = 2f64.sqrt();
        assert_abs_diff_eq!(c.q_values()[0], -s2, epsilon = 1e-14);
        assert_abs_diff_eq!(c.q_values()[1], s2, epsilon = 1e-14);
        assert_eq!(c.len(), 4);
        for (a, p) in c.amplitudes().iter().zip(c.probs()) {
            assert_abs_diff_eq!(a.re.abs(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(a.im.abs(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(*p, 0.25, epsilon = 1e-14);
        }
    }

    #[test]
    fn three_by_three_mean_photon_number() {
        let c = Constellation::new(3, 1.0).unwrap();
        // brute force over the nine points
        let mut n = 0.0;
        for x in 0..9 {
            n += c.probs()[x] * c.amplitudes()[x].norm_sqr();
        }
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
        // center point
        assert_abs_diff_eq!(c.probs()[4], 4.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_photon_number() {
        assert!(Constellation::new(4, 0.0).is_err());
        assert!(ApproxError::new(4, -1.0).is_err());
    }

    #[test]
    fn approx_error_at_unit_photon_number() {
        let e = ApproxError::new(10, 1.0).unwrap();
        let tau = 2.36 * 2.0 / 1024.0;
        assert_relative_eq!(e.tau, tau, max_relative = 1e-13);
        assert_relative_eq!(
            e.eps_td,
            0.5 * (tau * (2.0 + tau)).sqrt(),
            max_relative = 1e-13
        );
        assert_abs_diff_eq!(e.eps_td, 0.04806, epsilon = 5e-6);
        assert_relative_eq!(
            e.eps_prop,
            (tau * (2.0 + tau)).powf(0.25),
            max_relative = 1e-13
        );
        assert!(ApproxError::new(11, 1.0).unwrap().eps_td < e.eps_td);
    }

    #[test]
    fn approx_error_vanishes_for_dim_constellation() {
        let e = ApproxError::new(3, 1e-12).unwrap();
        assert!(e.tau < 1e-30 && e.eps_td < 1e-15);
    }

    #[test]
    fn chi2_examples() {
        let p = [0.6, 0.4];
        let q = [0.5, 0.5];
        assert_abs_diff_eq!(chi2_divergence(&q, &q).unwrap(), 0.0, epsilon = 1e-15);
        // 0.36/0.5 + 0.16/0.5 - 1
        assert_abs_diff_eq!(chi2_divergence(&p, &q).unwrap(), 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(chi2_product(&p, &q, &q, &q).unwrap(), 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(
            chi2_product(&p, &q, &p, &q).unwrap(),
            0.0816,
            epsilon = 1e-15
        );
    }

    #[test]
    fn chi2_rejects_missing_reference_mass() {
        assert!(chi2_divergence(&[0.5, 0.5], &[1.0, 0.0]).is_err());
        // zero p where q is zero is fine
        assert!(chi2_divergence(&[1.0, 0.0], &[1.0, 0.0]).is_ok());
    }
}
