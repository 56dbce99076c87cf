//! Monte-Carlo run of the prepare-and-measure protocol over a pure-loss
//! channel, and the phase-symmetrization algebra for covariance matrices.
//!
//! Each round draws from its own ChaCha8 stream: the generator is seeded
//! from `seed` and round `j` reads stream `j`. Rounds are therefore
//! independent of evaluation order and the whole record is a pure function
//! of the configuration.
//!
//! Pure loss maps coherent states to coherent states, so the received mode
//! is sampled directly: both quadratures of `|sqrt(eta) alpha e^{-i phi}>`
//! are unit-variance Gaussians around `2 Re` and `2 Im` of the amplitude.
//! Bob's inverse phase rotation then amounts to reading the right quadrature
//! with the right sign.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::PureLossChannel;
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::security::EBCovariance;

/// Minimum number of parameter-estimation rounds.
pub const MIN_ESTIMATION_ROUNDS: usize = 100;

pub type Matrix4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub m: usize,
    pub n_s: f64,
    pub eta: f64,
    pub n_rounds: usize,
    /// Fraction of rounds used for parameter estimation; the first
    /// `ceil(est_fraction * n_rounds)` rounds are used.
    pub est_fraction: f64,
    pub seed: u64,
    /// Apply the random phase and its inverse (steps 2-3). Off only for
    /// comparisons.
    pub phase_symmetrize: bool,
}

impl ProtocolConfig {
    pub fn new(
        m: usize,
        n_s: f64,
        eta: f64,
        n_rounds: usize,
        est_fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            m,
            n_s,
            eta,
            n_rounds,
            est_fraction,
            seed,
            phase_symmetrize: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m == 0 {
            return bad("constellation size must be positive".into());
        }
        if !(self.n_s > 0.0 && self.n_s.is_finite()) {
            return bad(format!("mean photon number must be > 0, got {}", self.n_s));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad(format!(
                "transmissivity must lie in (0, 1], got {}",
                self.eta
            ));
        }
        if !(self.est_fraction > 0.0 && self.est_fraction <= 1.0) {
            return bad(format!(
                "estimation fraction must lie in (0, 1], got {}",
                self.est_fraction
            ));
        }
        if self.estimation_rounds() < MIN_ESTIMATION_ROUNDS {
            return bad(format!(
                "only {} estimation rounds; at least {MIN_ESTIMATION_ROUNDS} are required",
                self.estimation_rounds()
            ));
        }
        Ok(())
    }

    pub fn estimation_rounds(&self) -> usize {
        ((self.est_fraction * self.n_rounds as f64).ceil() as usize).min(self.n_rounds)
    }
}

/// One of the four symmetrizing phases `k pi / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Zero,
    HalfPi,
    Pi,
    ThreeHalfPi,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Zero, Phase::HalfPi, Phase::Pi, Phase::ThreeHalfPi];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn angle(self) -> f64 {
        FRAC_PI_2 * self.index() as f64
    }

    /// `(cos, sin)` without rounding error.
    fn cos_sin(self) -> (f64, f64) {
        match self {
            Phase::Zero => (1.0, 0.0),
            Phase::HalfPi => (0.0, 1.0),
            Phase::Pi => (-1.0, 0.0),
            Phase::ThreeHalfPi => (0.0, -1.0),
        }
    }
}

/// Data kept from one protocol round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Round {
    /// Constellation index.
    pub x: usize,
    /// Alice's position label `2 Re(alpha_x)`.
    pub q: f64,
    pub phi: Phase,
    /// Bob's homodyne outcome after the inverse rotation.
    pub y: f64,
}

/// Sample estimates of the covariance parameters with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimates {
    pub n: usize,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub g11_se: f64,
    pub g12_se: f64,
    pub g22_se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRecord {
    pub config: ProtocolConfig,
    pub rounds: Vec<Round>,
    pub estimates: Estimates,
    /// Sample covariance over the estimation rounds of
    /// `(q_A, -p_A, y_q, y_p)`, where `p_A = 2 Im(alpha_x)` and `y_p` is the
    /// quadrature Bob did not read. The sign flip on `p_A` puts Alice's
    /// labels in the reference-mode convention of the entanglement-based
    /// picture. Diagnostic only; a homodyne receiver never sees `y_p`.
    pub phase_space_covariance: Matrix4,
}

struct Sample {
    round: Round,
    p_label: f64,
    y_conj: f64,
}

/// Runs `n_rounds` rounds and estimates `(gamma_11, gamma_12, gamma_22)`.
pub fn run_protocol(cfg: &ProtocolConfig) -> Result<SimulationRecord> {
    cfg.validate()?;
    let constellation = Constellation::new(cfg.m, cfg.n_s)?;
    let channel = PureLossChannel::new(cfg.eta)?;
    let picker = WeightedIndex::new(constellation.probs())
        .map_err(|e| Error::InvalidConfig(format!("constellation weights: {e}")))?;
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);

    let samples: Vec<Sample> = (0..cfg.n_rounds)
        .into_par_iter()
        .map(|j| {
            let mut rng = base.clone();
            rng.set_stream(j as u64);
            rng.set_word_pos(0);
            simulate_round(cfg, &constellation, &channel, &picker, &mut rng)
        })
        .collect();

    let k = cfg.estimation_rounds();
    let est = &samples[..k];
    let q: Vec<f64> = est.iter().map(|s| s.round.q).collect();
    let y: Vec<f64> = est.iter().map(|s| s.round.y).collect();
    let estimates = estimate(&q, &y);

    let columns: [Vec<f64>; 4] = [
        q,
        est.iter().map(|s| -s.p_label).collect(),
        y,
        est.iter().map(|s| s.y_conj).collect(),
    ];
    let phase_space_covariance = sample_covariance(&columns);

    Ok(SimulationRecord {
        config: *cfg,
        rounds: samples.into_iter().map(|s| s.round).collect(),
        estimates,
        phase_space_covariance,
    })
}

fn simulate_round(
    cfg: &ProtocolConfig,
    constellation: &Constellation,
    channel: &PureLossChannel,
    picker: &WeightedIndex<f64>,
    rng: &mut ChaCha8Rng,
) -> Sample {
    let x = picker.sample(rng);
    let alpha = constellation.amplitudes()[x];
    let phi = if cfg.phase_symmetrize {
        Phase::ALL[rng.random_range(0..4)]
    } else {
        Phase::Zero
    };
    let (cos, sin) = phi.cos_sin();
    let sent = alpha * Complex64::new(cos, -sin);

    let q_rx = channel.conditional_output(sent);
    let p_rx = channel.conditional_output(sent * Complex64::new(0.0, -1.0));
    let noise_q: f64 = rng.sample(StandardNormal);
    let noise_p: f64 = rng.sample(StandardNormal);
    let q_b = q_rx.mean + q_rx.variance.sqrt() * noise_q;
    let p_b = p_rx.mean + p_rx.variance.sqrt() * noise_p;

    // rotate back by e^{+i phi}
    let y = cos * q_b - sin * p_b;
    let y_conj = sin * q_b + cos * p_b;
    Sample {
        round: Round {
            x,
            q: 2.0 * alpha.re,
            phi,
            y,
        },
        p_label: 2.0 * alpha.im,
        y_conj,
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

fn mean(values: &[f64]) -> f64 {
    compensated_sum(values.iter().copied()) / values.len() as f64
}

/// `(1/n) sum (a - a_bar)(b - b_bar)` and its standard error.
fn central_product(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (ma, mb) = (mean(a), mean(b));
    let n = a.len() as f64;
    let products: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let value = mean(&products);
    let second = compensated_sum(products.iter().map(|p| p * p)) / n;
    (value, ((second - value * value).max(0.0) / n).sqrt())
}

fn estimate(q: &[f64], y: &[f64]) -> Estimates {
    let (g11, g11_se) = central_product(q, q);
    let (g12, g12_se) = central_product(q, y);
    let (g22, g22_se) = central_product(y, y);
    Estimates {
        n: q.len(),
        g11,
        g12,
        g22,
        g11_se,
        g12_se,
        g22_se,
    }
}

fn sample_covariance(columns: &[Vec<f64>; 4]) -> Matrix4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let (v, _) = central_product(&columns[i], &columns[j]);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Copies a row-major nested vector into a 4x4 matrix.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix4> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
        return Err(Error::Shape(format!("row lengths {shape:?}")));
    }
    let mut out = [[0.0; 4]; 4];
    for (dst, src) in out.iter_mut().zip(rows) {
        dst.copy_from_slice(src);
    }
    Ok(out)
}

fn scale_of(m: &Matrix4) -> f64 {
    m.iter().flatten().fold(1.0f64, |acc, v| acc.max(v.abs()))
}

/// Phase rotation `e^{-i n_R phi} (x) e^{i n_B phi}` on the quadratures
/// `(x_R, p_R, x_B, p_B)`.
pub fn rotation(phase: Phase) -> Matrix4 {
    let (c, s) = phase.cos_sin();
    [
        [c, s, 0.0, 0.0],
        [-s, c, 0.0, 0.0],
        [0.0, 0.0, c, -s],
        [0.0, 0.0, s, c],
    ]
}

/// Average of `X(k pi/2) sigma X(k pi/2)^T` over the four phases.
pub fn symmetrize_covariance(sigma: &Matrix4) -> Result<Matrix4> {
    let tol = 1e-12 * scale_of(sigma);
    for i in 0..4 {
        for j in 0..i {
            if (sigma[i][j] - sigma[j][i]).abs() > tol {
                return Err(Error::Shape(format!(
                    "entries ({i},{j}) and ({j},{i}) differ: {} vs {}",
                    sigma[i][j], sigma[j][i]
                )));
            }
        }
    }
    let mut out = [[0.0; 4]; 4];
    for phase in Phase::ALL {
        let x = rotation(phase);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    for l in 0..4 {
                        acc += x[i][k] * sigma[k][l] * x[j][l];
                    }
                }
                out[i][j] += 0.25 * acc;
            }
        }
    }
    Ok(out)
}

/// Parameters `(a, b, c2, c1)` of a matrix in the symmetrized block form
///
/// ```text
/// [ a   0   c2  c1 ]
/// [ 0   a   c1 -c2 ]
/// [ c2  c1  b   0  ]
/// [ c1 -c2  0   b  ]
/// ```
pub fn symmetric_form_params(sym: &Matrix4) -> Result<(f64, f64, f64, f64)> {
    let a = sym[0][0];
    let b = sym[2][2];
    let c2 = sym[0][2];
    let c1 = sym[0][3];
    let expected = [
        [a, 0.0, c2, c1],
        [0.0, a, c1, -c2],
        [c2, c1, b, 0.0],
        [c1, -c2, 0.0, b],
    ];
    let tol = 1e-9 * scale_of(sym);
    for i in 0..4 {
        for j in 0..4 {
            if (sym[i][j] - expected[i][j]).abs() > tol {
                return Err(Error::Form(format!(
                    "entry ({i},{j}) is {} but the block form needs {}",
                    sym[i][j], expected[i][j]
                )));
            }
        }
    }
    Ok((a, b, c2, c1))
}

/// Keeps only the position-position correlation `c2` of a symmetrized
/// matrix, dropping the cross-quadrature term `c1`.
///
/// Dropping `c1` lowers the correlation and hence raises the Holevo bound.
pub fn reduce_to_theta0(sym: &Matrix4) -> Result<EBCovariance> {
    let (a, b, c2, _) = symmetric_form_params(sym)?;
    Ok(EBCovariance::new(a, b, c2))
}
