//! Probabilists' Hermite polynomials and the Gauss-Hermite probability rule.
//!
//! The rule with `m` nodes places atoms at the roots `l_1 < ... < l_m` of
//! `He_m` with probabilities
//!
//! ```text
//! r(l) = (m-1)! / (m He_{m-1}(l)^2)
//! ```
//!
//! which reproduce the first `2m-1` moments of the standard normal
//! distribution. Roots come from the eigenvalues of the symmetric Jacobi
//! matrix of the `He` recurrence (zero diagonal, `sqrt(k)` off-diagonal),
//! polished with Newton steps. Both the polish and the weights use the
//! orthonormal recurrence `p_n = He_n / sqrt(n!)`, so nothing overflows for
//! `m` up to [`MAX_NODES`].

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{domain, Error, Result};

/// Largest supported rule size.
pub const MAX_NODES: usize = 200;

const ROOT_TOL: f64 = 1e-13;
const MAX_POLISH: usize = 6;
const MAX_EIGEN_SWEEPS: usize = 100;

/// Evaluates `He_n(x)` by the three-term recurrence.
///
/// This is the raw polynomial and overflows for large `n`; use it for small
/// degrees or as a reference.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Returns `(p_n(x), p_{n-1}(x))` with `p_k = He_k / sqrt(k!)`.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let k = k as f64;
        let next = (x * cur - k.sqrt() * prev) / (k + 1.0).sqrt();
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Nodes and probability weights of the `m`-point Gauss-Hermite rule for the
/// standard normal distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermiteRule {
    /// Builds the rule with `m` nodes, `1 <= m <= MAX_NODES`.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_NODES {
            return Err(domain(format!(
                "rule size must be in 1..={MAX_NODES}, got {m}"
            )));
        }
        let mut nodes = jacobi_eigenvalues(m)?;
        nodes.sort_by(f64::total_cmp);

        for (index, x) in nodes.iter_mut().enumerate() {
            *x = polish_root(m, index, *x)?;
        }
        // Fold the two halves together so the rule is exactly symmetric.
        for k in 0..m / 2 {
            let half = 0.5 * (nodes[m - 1 - k] - nodes[k]);
            nodes[k] = -half;
            nodes[m - 1 - k] = half;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }

        let weights = nodes
            .iter()
            .map(|&x| {
                let (_, below) = orthonormal_pair(m, x);
                1.0 / (m as f64 * below * below)
            })
            .collect();
        Ok(Self { nodes, weights })
    }

    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    /// Roots of `He_m`, strictly increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i l_i^k`.
    pub fn moment(&self, k: u32) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * x.powi(k as i32))
            .sum()
    }
}

fn polish_root(m: usize, index: usize, mut x: f64) -> Result<f64> {
    let scale = (m as f64).sqrt();
    let mut step = f64::INFINITY;
    for _ in 0..MAX_POLISH {
        let (value, below) = orthonormal_pair(m, x);
        // He_m / He_m' = p_m / (sqrt(m) p_{m-1})
        step = value / (scale * below);
        x -= step;
        if step.abs() <= ROOT_TOL * x.abs().max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::RootConvergenceFailure {
        m,
        index,
        residual: step.abs(),
    })
}

/// Eigenvalues of the Jacobi matrix of `He_m`.
fn jacobi_eigenvalues(m: usize) -> Result<Vec<f64>> {
    let jacobi = DMatrix::from_fn(m, m, |i, j| {
        if i.abs_diff(j) == 1 {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(jacobi, f64::EPSILON, MAX_EIGEN_SWEEPS * m).ok_or(
        Error::RootConvergenceFailure {
            m,
            index: 0,
            residual: f64::NAN,
        },
    )?;
    Ok(eig.eigenvalues.iter().copied().collect())
}
