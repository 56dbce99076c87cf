//! Key-rate assembly and the mean-photon-number search.

use std::sync::Mutex;

use rayon::prelude::*;

use crate::channel::PureLossChannel;
use crate::constellation::{ApproxError, Constellation};
use crate::error::{domain, Error, Result};
use crate::optimize::{golden_min, log_grid};

use super::continuity::{continuity_penalty, DEFAULT_P_CAP};
use super::covariance::{interval_half_widths, pm_to_eb};

pub const NS_GRID_MIN: f64 = 1e-3;
pub const NS_GRID_MAX: f64 = 20.0;
pub const NS_GRID_POINTS: usize = 25;
const NS_LN_TOL: f64 = 1e-4;

/// Protocol and proof constants entering the rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    /// Reconciliation efficiency.
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    /// Energy cap on Eve's system.
    pub p_cap: f64,
}

impl Default for RateParams {
    fn default() -> Self {
        Self {
            beta: 0.98,
            c1: 100.0,
            c2: 100.0,
            p_cap: DEFAULT_P_CAP,
        }
    }
}

impl RateParams {
    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(domain(format!(
                "beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(domain("c1 and c2 must be positive"));
        }
        if !(self.p_cap > 0.0 && self.p_cap.is_finite()) {
            return Err(domain(format!(
                "energy cap must be positive, got {}",
                self.p_cap
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RateStatus {
    /// Every term was evaluated; `key_rate = beta i_xy - holevo - f_penalty`
    /// and may be negative.
    Computed,
    /// The bound does not certify a key at this point; `key_rate` is 0.
    NoKey(String),
}

/// All terms of the rate at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyRateBreakdown {
    pub n_s: f64,
    pub i_xy: f64,
    /// Eve's Holevo bound; NaN when no covariance bound exists.
    pub holevo: f64,
    /// Continuity penalty; NaN when the approximation error is too large.
    pub f_penalty: f64,
    pub beta: f64,
    pub key_rate: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub status: RateStatus,
}

impl KeyRateBreakdown {
    pub fn is_key(&self) -> bool {
        self.status == RateStatus::Computed
    }

    /// The rate with negative values reported as 0.
    pub fn clamped_rate(&self) -> f64 {
        self.key_rate.max(0.0)
    }

    fn no_key(mut self, reason: impl Into<String>) -> Self {
        self.key_rate = 0.0;
        self.status = RateStatus::NoKey(reason.into());
        self
    }
}

/// Lower bound on the asymptotic key rate of the `m x m` constellation at
/// mean photon number `n_s`.
pub fn key_rate(
    ch: &PureLossChannel,
    m: usize,
    n_s: f64,
    params: &RateParams,
) -> Result<KeyRateBreakdown> {
    params.validate()?;
    let constellation = Constellation::new(m, n_s)?;
    let err = ApproxError::new(m, n_s)?;
    let stats = ch.analytic_stats(&constellation);
    let i_xy = ch.mutual_information(&constellation)?;
    let (eps1, eps2) = interval_half_widths(&err, &stats, params.c1, params.c2);

    let mut out = KeyRateBreakdown {
        n_s,
        i_xy,
        holevo: f64::NAN,
        f_penalty: f64::NAN,
        beta: params.beta,
        key_rate: 0.0,
        eps1,
        eps2,
        status: RateStatus::Computed,
    };
    if err.eps_td >= 0.5 {
        return Ok(out.no_key(format!(
            "trace-distance bound {} is not below 1/2",
            err.eps_td
        )));
    }
    out.f_penalty = continuity_penalty(err.eps_td, params.p_cap)?;
    if !(stats.g11 > 0.0) {
        return Ok(out.no_key("single-point constellation"));
    }
    let eb = match pm_to_eb(&stats, eps1, eps2) {
        Ok(eb) => eb,
        Err(Error::NoKeyPossible(reason)) => return Ok(out.no_key(reason)),
        Err(e) => return Err(e),
    };
    out.holevo = eb.holevo_bound()?;
    out.key_rate = params.beta * out.i_xy - out.holevo - out.f_penalty;
    Ok(out)
}

/// Gaussian-modulation rate at mean photon number `n_s`, with exact
/// parameters and no approximation penalty.
pub fn gaussian_key_rate(ch: &PureLossChannel, n_s: f64, beta: f64) -> Result<KeyRateBreakdown> {
    if !(n_s > 0.0 && n_s.is_finite()) {
        return Err(domain(format!("mean photon number must be > 0, got {n_s}")));
    }
    let stats = ch.gaussian_stats(n_s);
    let holevo = pm_to_eb(&stats, 0.0, 0.0)?.holevo_bound()?;
    let i_xy = ch.mutual_information_gaussian(n_s);
    Ok(KeyRateBreakdown {
        n_s,
        i_xy,
        holevo,
        f_penalty: 0.0,
        beta,
        key_rate: beta * i_xy - holevo,
        eps1: 0.0,
        eps2: 0.0,
        status: RateStatus::Computed,
    })
}

/// Maximizes [`key_rate`] over `N_S`: a log grid on `[1e-3, 20]` followed
/// by golden-section refinement around the best grid point.
///
/// When no grid point certifies a positive rate the best grid breakdown is
/// returned with status [`RateStatus::NoKey`] and a zero rate.
pub fn optimize_ns(
    ch: &PureLossChannel,
    m: usize,
    params: &RateParams,
) -> Result<KeyRateBreakdown> {
    maximize_over_ns(|n_s| key_rate(ch, m, n_s, params))
}

/// [`optimize_ns`] for the Gaussian-modulation rate.
pub fn optimize_gaussian_ns(ch: &PureLossChannel, beta: f64) -> Result<KeyRateBreakdown> {
    maximize_over_ns(|n_s| gaussian_key_rate(ch, n_s, beta))
}

fn maximize_over_ns<F>(rate_at: F) -> Result<KeyRateBreakdown>
where
    F: Fn(f64) -> Result<KeyRateBreakdown> + Sync,
{
    let grid = log_grid(NS_GRID_MIN, NS_GRID_MAX, NS_GRID_POINTS);
    let points: Vec<KeyRateBreakdown> = grid
        .par_iter()
        .map(|&n_s| rate_at(n_s))
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, p) in points.iter().enumerate() {
        if p.key_rate > points[best].key_rate {
            best = i;
        }
    }
    if points[best].key_rate <= 0.0 {
        let reason = "no positive rate on the mean-photon-number grid";
        return Ok(points[best].clone().no_key(reason));
    }

    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let (ln_ns, _) = golden_min(
        |s| match rate_at(s.exp()) {
            Ok(p) => -p.key_rate,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        NS_LN_TOL,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let refined = rate_at(ln_ns.exp())?;
    if refined.key_rate > points[best].key_rate {
        Ok(refined)
    } else {
        Ok(points[best].clone())
    }
}

/// Repeaterless secret-key capacity of the pure-loss channel,
/// `-log2(1 - eta)`.
pub fn plob_bound(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain(format!("PLOB bound needs 0 < eta < 1, got {eta}")));
    }
    Ok(-(-eta).ln_1p() / std::f64::consts::LN_2)
}
