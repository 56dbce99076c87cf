//! Certified lower bounds on the asymptotic secret-key rate of
//! discrete-modulation continuous-variable QKD.
//!
//! Alice sends coherent states drawn from an `m x m` Gauss-Hermite
//! constellation, Bob measures the position quadrature, and the key is
//! distilled with reverse reconciliation. The bound compares the
//! constellation with the thermal state it approximates, borrows the
//! Gaussian-modulation security analysis for the thermal state, and pays a
//! continuity penalty for the difference.
//!
//! ```
//! use dmqkd::{optimize_ns, PureLossChannel, RateParams};
//!
//! let channel = PureLossChannel::from_loss_db(10.0)?;
//! let best = optimize_ns(&channel, 64, &RateParams::default())?;
//! assert!(best.key_rate > 0.0);
//! # Ok::<(), dmqkd::Error>(())
//! ```

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod constellation;
mod error;
pub mod ghquad;
pub mod optimize;
pub mod quad;
pub mod security;
pub mod simulator;

pub use channel::{CovarianceStats, GaussianDensity, PureLossChannel};
pub use constellation::{chi2_divergence, chi2_product, ApproxError, Constellation};
pub use error::{Error, Result};
pub use ghquad::{hermite_eval, GaussHermiteRule};
pub use security::{
    binary_entropy, continuity_penalty, g_func, gaussian_key_rate, interval_half_widths, key_rate,
    optimize_gaussian_ns, optimize_ns, plob_bound, pm_to_eb, EBCovariance, KeyRateBreakdown,
    RateParams, RateStatus,
};
pub use simulator::{
    reduce_to_theta0, run_protocol, symmetrize_covariance, ProtocolConfig, SimulationRecord,
};

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        )*
    };
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

book_chapters! {
    book_introduction => "introduction.md",
    book_quadrature => "quadrature.md",
    book_constellation => "constellation.md",
    book_channel => "channel.md",
    book_holevo => "holevo.md",
    book_continuity => "continuity.md",
    book_key_rate => "key_rate.md",
    book_simulator => "simulator.md",
    book_cli => "cli.md",
}
