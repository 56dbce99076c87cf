//! Key-rate lower bound against collective attacks.
//!
//! The pipeline for one operating point is
//!
//! 1. approximation error of the constellation against the thermal state,
//! 2. intervals for the Gaussian-protocol covariance parameters,
//! 3. worst-case entanglement-based covariance and its Holevo bound,
//! 4. continuity penalty for replacing the thermal state by the
//!    constellation,
//! 5. `K = beta I(X;Y) - chi(Y;E) - f(eps, P)`.

mod continuity;
mod covariance;
mod entropy;
mod rate;

pub use continuity::{
    continuity_penalty, minimize as continuity_minimizer, t_max, ContinuityParams, DEFAULT_P_CAP,
    T_MIN,
};
pub use covariance::{interval_half_widths, pm_to_eb, EBCovariance};
pub use entropy::{binary_entropy, g_func};
pub use rate::{
    gaussian_key_rate, key_rate, optimize_gaussian_ns, optimize_ns, plob_bound, KeyRateBreakdown,
    RateParams, RateStatus, NS_GRID_MAX, NS_GRID_MIN, NS_GRID_POINTS,
};
