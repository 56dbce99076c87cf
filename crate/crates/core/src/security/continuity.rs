//! Energy-constrained continuity penalty for the Holevo information.
//!
//! For a trace-distance bound `eps` and energy cap `P` on Eve's system,
//!
//! ```text
//! f(eps, P) = min_t  eps (2t + r(t)) g(P / (eps t)) + 2 g(eps r(t)) + 2 h(eps t)
//! r(t)      = (1 + t/2) / (1 - eps t),        0 < t <= 1 / (2 eps)
//! ```
//!
//! with Eve modelled as a single oscillator, so her energy-`E` thermal entropy
//! is `g(E)`. The minimum is located on a log-spaced grid in `t` and then
//! refined by golden-section search in `ln t`.

use crate::error::{domain, Result};
use crate::optimize::{bracket_of_min, golden_min, log_grid};

use super::entropy::{binary_entropy_unchecked, thermal_entropy};

/// Energy cap used by the production bounds.
pub const DEFAULT_P_CAP: f64 = 1e7;

pub const T_MIN: f64 = 1e-6;
const GRID_POINTS: usize = 64;
const LN_T_TOL: f64 = 1e-12;

/// A fully specified evaluation point of the penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityParams {
    pub p_cap: f64,
    pub eps: f64,
    pub t: f64,
}

impl ContinuityParams {
    /// Penalty value at this `t`. Requires `eps > 0` and `eps t <= 1/2`.
    pub fn value(&self) -> f64 {
        let Self { p_cap, eps, t } = *self;
        let et = eps * t;
        let r = (1.0 + 0.5 * t) / (1.0 - et);
        eps * (2.0 * t + r) * thermal_entropy(p_cap / et)
            + 2.0 * thermal_entropy(eps * r)
            + 2.0 * binary_entropy_unchecked(et)
    }
}

/// Upper end of the admissible `t` range used by the search.
pub fn t_max(eps: f64) -> f64 {
    0.5 / eps * (1.0 - 1e-9)
}

/// The minimizing parameters; `None` when `eps == 0` (penalty is 0).
pub fn minimize(eps: f64, p_cap: f64) -> Result<Option<ContinuityParams>> {
    check_domain(eps, p_cap)?;
    if eps == 0.0 {
        return Ok(None);
    }
    let at = |t: f64| ContinuityParams { p_cap, eps, t }.value();
    let grid = log_grid(T_MIN, t_max(eps), GRID_POINTS);
    let values: Vec<f64> = grid.iter().map(|&t| at(t)).collect();
    let (lo, best, hi) = bracket_of_min(&values);

    let (ln_t, refined) = golden_min(|s| at(s.exp()), grid[lo].ln(), grid[hi].ln(), LN_T_TOL);
    let t = if refined < values[best] {
        ln_t.exp()
    } else {
        grid[best]
    };
    Ok(Some(ContinuityParams { p_cap, eps, t }))
}

/// `f(eps, P)` in bits.
pub fn continuity_penalty(eps: f64, p_cap: f64) -> Result<f64> {
    Ok(minimize(eps, p_cap)?.map_or(0.0, |p| p.value()))
}

fn check_domain(eps: f64, p_cap: f64) -> Result<()> {
    if !(0.0..0.5).contains(&eps) {
        return Err(domain(format!(
            "continuity bound needs 0 <= eps < 1/2, got {eps}"
        )));
    }
    if !(p_cap > 0.0 && p_cap.is_finite()) {
        return Err(domain(format!("energy cap must be positive, got {p_cap}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_error_has_zero_penalty() {
        assert_eq!(continuity_penalty(0.0, DEFAULT_P_CAP).unwrap(), 0.0);
        assert_eq!(continuity_penalty(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(continuity_penalty(0.5, DEFAULT_P_CAP).is_err());
        assert!(continuity_penalty(-1e-3, DEFAULT_P_CAP).is_err());
        assert!(continuity_penalty(1e-3, 0.0).is_err());
    }

    #[test]
    fn larger_error_costs_more() {
        let lo = continuity_penalty(1e-5, DEFAULT_P_CAP).unwrap();
        let hi = continuity_penalty(1e-4, DEFAULT_P_CAP).unwrap();
        assert!(lo > 0.0 && hi > lo && hi.is_finite());
    }

    #[test]
    fn minimizer_stays_in_range() {
        for eps in [1e-10, 1e-4, 0.1, 0.49] {
            let p = minimize(eps, DEFAULT_P_CAP).unwrap().unwrap();
            assert!(p.t >= T_MIN && p.t <= t_max(eps));
            assert!(eps * p.t <= 0.5);
        }
    }
}
