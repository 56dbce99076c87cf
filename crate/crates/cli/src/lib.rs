//! Report generation behind the `dmqkd` binary. Every command renders to a
//! `String` so the binary only parses arguments and writes bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use dmqkd::{
    gaussian_key_rate, key_rate, optimize_gaussian_ns, optimize_ns, plob_bound, run_protocol,
    Constellation, KeyRateBreakdown, ProtocolConfig, PureLossChannel, RateParams,
};
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] dmqkd::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Formats `x` with 9 significant digits, in the style of C's `%.9g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Flat `key = value` settings; `#` starts a comment. Keys accept `-` or `_`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", n + 1))
            })?;
            entries.insert(key.trim().replace('_', "-"), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn read(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}")))
            })
            .transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.entries
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse().map_err(|_| {
                            CliError::Usage(format!("config key {key}: cannot parse {item:?}"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn get_flag(&self, key: &str) -> Result<bool> {
        match self.entries.get(key).map(String::as_str) {
            None | Some("false" | "0" | "no") => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some(v) => Err(CliError::Usage(format!(
                "config key {key}: expected a boolean, got {v:?}"
            ))),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Axes and constants of a key-rate sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub loss_db: Vec<f64>,
    pub m_list: Vec<usize>,
    pub params: RateParams,
    /// Fixed mean photon number; `None` optimizes it per row.
    pub n_s: Option<f64>,
    pub include_gaussian: bool,
    pub include_plob: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.loss_db.is_empty() || self.m_list.is_empty() {
            return Err(CliError::Usage(
                "loss and constellation lists must be non-empty".into(),
            ));
        }
        if let Some(&bad) = self.loss_db.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return Err(CliError::Usage(format!(
                "loss must be non-negative dB, got {bad}"
            )));
        }
        if self.m_list.contains(&0) {
            return Err(CliError::Usage(
                "constellation sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One evaluated `(loss, m)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub loss_db: f64,
    pub eta: f64,
    pub m: usize,
    pub rate: KeyRateBreakdown,
    pub gaussian: Option<KeyRateBreakdown>,
    pub plob: Option<f64>,
}

impl RateRow {
    /// Printed key rate; no certified key prints as 0.
    pub fn key_rate(&self) -> f64 {
        if self.rate.is_key() {
            self.rate.clamped_rate()
        } else {
            0.0
        }
    }

    pub fn clamped(&self) -> bool {
        !(self.rate.is_key() && self.rate.key_rate > 0.0)
    }

    pub fn gaussian_rate(&self) -> Option<f64> {
        self.gaussian.as_ref().map(|g| g.clamped_rate())
    }
}

fn evaluate_row(spec: &SweepSpec, loss_db: f64, m: usize) -> Result<RateRow> {
    let ch = PureLossChannel::from_loss_db(loss_db)?;
    let rate = match spec.n_s {
        Some(n_s) => key_rate(&ch, m, n_s, &spec.params)?,
        None => optimize_ns(&ch, m, &spec.params)?,
    };
    let gaussian = if spec.include_gaussian {
        let beta = spec.params.beta;
        let at_point = gaussian_key_rate(&ch, rate.n_s, beta)?;
        Some(match spec.n_s {
            Some(_) => at_point,
            None => {
                let own = optimize_gaussian_ns(&ch, beta)?;
                if own.key_rate >= at_point.key_rate {
                    own
                } else {
                    at_point
                }
            }
        })
    } else {
        None
    };
    let plob = spec
        .include_plob
        .then(|| plob_bound(ch.eta()))
        .transpose()?;
    Ok(RateRow {
        loss_db,
        eta: ch.eta(),
        m,
        rate,
        gaussian,
        plob,
    })
}

/// Evaluates every `(loss, m)` pair, loss-major, in parallel.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<RateRow>> {
    spec.validate()?;
    let points: Vec<(f64, usize)> = spec
        .loss_db
        .iter()
        .flat_map(|&l| spec.m_list.iter().map(move |&m| (l, m)))
        .collect();
    points
        .par_iter()
        .map(|&(l, m)| evaluate_row(spec, l, m))
        .collect()
}

pub fn render_rates(spec: &SweepSpec, rows: &[RateRow]) -> String {
    let mut header = vec![
        "loss_db",
        "eta",
        "m",
        "n_s_opt",
        "i_xy",
        "holevo",
        "f_penalty",
        "key_rate",
        "clamped",
    ];
    if spec.include_gaussian {
        header.extend(["gaussian_i_xy", "gaussian_rate"]);
    }
    if spec.include_plob {
        header.push("plob");
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let r = &row.rate;
        let mut cells = vec![
            fmt_num(row.loss_db),
            fmt_num(row.eta),
            row.m.to_string(),
            fmt_num(r.n_s),
            fmt_num(r.i_xy),
            fmt_num(r.holevo),
            fmt_num(r.f_penalty),
            fmt_num(row.key_rate()),
            u8::from(row.clamped()).to_string(),
        ];
        if let Some(g) = &row.gaussian {
            cells.push(fmt_num(g.i_xy));
            cells.push(fmt_num(g.clamped_rate()));
        }
        if let Some(p) = row.plob {
            cells.push(fmt_num(p));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Key-rate table, one row per `(loss, m)`.
pub fn cmd_rates(spec: &SweepSpec) -> Result<String> {
    Ok(render_rates(spec, &sweep(spec)?))
}

/// Constellation points as `index,re_alpha,im_alpha,prob`.
pub fn cmd_constellation(m: usize, n_s: f64) -> Result<String> {
    if m == 0 {
        return Err(CliError::Usage(
            "constellation size must be positive".into(),
        ));
    }
    let c = Constellation::new(m, n_s)?;
    let mut out = String::from("index,re_alpha,im_alpha,prob\n");
    for (i, (a, p)) in c.amplitudes().iter().zip(c.probs()).enumerate() {
        writeln!(
            out,
            "{i},{},{},{}",
            fmt_num(a.re),
            fmt_num(a.im),
            fmt_num(*p)
        )
        .unwrap();
    }
    Ok(out)
}

/// Simulation summary and, when requested, the per-round table.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub summary: String,
    pub rounds_csv: Option<String>,
}

/// Runs the protocol and compares the estimates with the analytic values.
pub fn cmd_simulate(cfg: &ProtocolConfig, dump_rounds: bool) -> Result<SimulationReport> {
    let record = run_protocol(cfg)?;
    let exact = PureLossChannel::new(cfg.eta)?.analytic_stats(&Constellation::new(cfg.m, cfg.n_s)?);
    let e = &record.estimates;

    let mut summary = String::from("parameter,estimate,std_error,analytic,z_score\n");
    for (name, got, se, want) in [
        ("g11", e.g11, e.g11_se, exact.g11),
        ("g12", e.g12, e.g12_se, exact.g12),
        ("g22", e.g22, e.g22_se, exact.g22),
    ] {
        let z = if se > 0.0 { (got - want) / se } else { 0.0 };
        writeln!(
            summary,
            "{name},{},{},{},{}",
            fmt_num(got),
            fmt_num(se),
            fmt_num(want),
            fmt_num(z)
        )
        .unwrap();
    }

    let rounds_csv = dump_rounds.then(|| {
        let mut csv = String::from("round,x,q,phi,y\n");
        for (j, r) in record.rounds.iter().enumerate() {
            writeln!(
                csv,
                "{j},{},{},{},{}",
                r.x,
                fmt_num(r.q),
                fmt_num(r.phi.angle()),
                fmt_num(r.y)
            )
            .unwrap();
        }
        csv
    });
    Ok(SimulationReport {
        summary,
        rounds_csv,
    })
}
