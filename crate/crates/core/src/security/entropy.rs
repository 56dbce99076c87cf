//! Entropy kernels in bits.

use crate::error::{domain, Result};

/// Entropy of a thermal state with mean photon number `x`:
/// `(x + 1) log2(x + 1) - x log2(x)`, with `g(0) = 0`.
pub fn g_func(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("g is defined for x >= 0, got {x}")));
    }
    Ok(thermal_entropy(x))
}

/// Unchecked `g`; negative input is treated as 0.
pub(crate) fn thermal_entropy(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    // log2(x + 1) + x log2(1 + 1/x), free of cancellation for large x
    ((x.ln_1p()) + x * x.recip().ln_1p()) / std::f64::consts::LN_2
}

/// Entropy of a single-mode Gaussian state with symplectic eigenvalue `nu`
/// in shot-noise units (vacuum `nu = 1`).
pub(crate) fn snu_entropy(nu: f64) -> f64 {
    thermal_entropy(0.5 * (nu - 1.0))
}

/// Binary entropy `-x log2 x - (1 - x) log2 (1 - x)`; zero at the endpoints.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("binary entropy needs x in [0, 1], got {x}")));
    }
    Ok(binary_entropy_unchecked(x))
}

pub(crate) fn binary_entropy_unchecked(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.ln() + (1.0 - x) * (-x).ln_1p()) / std::f64::consts::LN_2
}
