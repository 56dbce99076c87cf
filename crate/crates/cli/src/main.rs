use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use dmqkd::{ProtocolConfig, RateParams};
use dmqkd_cli::{
    cmd_constellation, cmd_rates, cmd_simulate, CliError, ConfigFile, Result, SweepSpec,
};

/// Key-rate lower bounds for discrete-modulation CV-QKD over pure loss.
#[derive(Debug, Parser)]
#[command(name = "dmqkd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimized key rates for every (loss, m) pair, as CSV.
    Rates(RatesArgs),
    /// Constellation amplitudes and probabilities, as CSV.
    Constellation(ConstellationArgs),
    /// Monte-Carlo protocol run compared with the analytic statistics.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// File of `key = value` lines; command-line flags take precedence.
    #[arg(long)]
    config: Option<String>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[command(flatten)]
    common: Common,
    /// Channel losses in dB.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    loss_db: Option<Vec<f64>>,
    /// Constellation sizes (m nodes per quadrature).
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Reconciliation efficiency.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Energy cap on the eavesdropper's system.
    #[arg(long)]
    p_cap: Option<f64>,
    /// Fixed mean photon number instead of optimizing it.
    #[arg(long)]
    ns: Option<f64>,
    /// Add the Gaussian-modulation baseline.
    #[arg(long)]
    gaussian: bool,
    /// Add the repeaterless capacity bound.
    #[arg(long)]
    plob: bool,
}

#[derive(Debug, Args)]
struct ConstellationArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    m: Option<usize>,
    /// Mean photon number.
    #[arg(long)]
    ns: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    ns: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    loss_db: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Fraction of rounds used for parameter estimation.
    #[arg(long)]
    est_fraction: Option<f64>,
}

const RATES_KEYS: &[&str] = &[
    "loss-db", "m", "beta", "c1", "c2", "p-cap", "ns", "gaussian", "plob", "out",
];
const CONSTELLATION_KEYS: &[&str] = &["m", "ns", "out"];
const SIMULATE_KEYS: &[&str] = &[
    "m",
    "ns",
    "loss-db",
    "seed",
    "rounds",
    "est-fraction",
    "out",
];

fn load_config(common: &Common, allowed: &[&str]) -> Result<ConfigFile> {
    let cfg = match &common.config {
        Some(path) => ConfigFile::read(path)?,
        None => ConfigFile::default(),
    };
    if let Some(key) = cfg.keys().find(|k| !allowed.contains(k)) {
        return Err(CliError::Usage(format!("unknown config key {key:?}")));
    }
    Ok(cfg)
}

fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{key} is required")))
}

fn emit(text: &str, out: Option<String>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io { path, source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rates(args: RatesArgs) -> Result<()> {
    let cfg = load_config(&args.common, RATES_KEYS)?;
    let defaults = RateParams::default();
    let loss_db = match args.loss_db {
        Some(v) => v,
        None => required(cfg.get_list("loss-db")?, "loss-db")?,
    };
    let m_list = match args.m {
        Some(v) => v,
        None => required(cfg.get_list("m")?, "m")?,
    };
    let spec = SweepSpec {
        loss_db,
        m_list,
        params: RateParams {
            beta: pick(args.beta, &cfg, "beta")?.unwrap_or(defaults.beta),
            c1: pick(args.c1, &cfg, "c1")?.unwrap_or(defaults.c1),
            c2: pick(args.c2, &cfg, "c2")?.unwrap_or(defaults.c2),
            p_cap: pick(args.p_cap, &cfg, "p-cap")?.unwrap_or(defaults.p_cap),
        },
        n_s: pick(args.ns, &cfg, "ns")?,
        include_gaussian: args.gaussian || cfg.get_flag("gaussian")?,
        include_plob: args.plob || cfg.get_flag("plob")?,
    };
    emit(&cmd_rates(&spec)?, pick(args.common.out, &cfg, "out")?)
}

fn constellation(args: ConstellationArgs) -> Result<()> {
    let cfg = load_config(&args.common, CONSTELLATION_KEYS)?;
    let m = required(pick(args.m, &cfg, "m")?, "m")?;
    let n_s = required(pick(args.ns, &cfg, "ns")?, "ns")?;
    emit(
        &cmd_constellation(m, n_s)?,
        pick(args.common.out, &cfg, "out")?,
    )
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let cfg = load_config(&args.common, SIMULATE_KEYS)?;
    let loss_db: f64 = required(pick(args.loss_db, &cfg, "loss-db")?, "loss-db")?;
    let eta = dmqkd::PureLossChannel::from_loss_db(loss_db)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .eta();
    let protocol = ProtocolConfig::new(
        required(pick(args.m, &cfg, "m")?, "m")?,
        required(pick(args.ns, &cfg, "ns")?, "ns")?,
        eta,
        pick(args.rounds, &cfg, "rounds")?.unwrap_or(100_000),
        pick(args.est_fraction, &cfg, "est-fraction")?.unwrap_or(0.1),
        pick(args.seed, &cfg, "seed")?.unwrap_or(0),
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let out = pick(args.common.out, &cfg, "out")?;
    let report = cmd_simulate(&protocol, out.is_some())?;
    print!("{}", report.summary);
    match report.rounds_csv {
        Some(csv) => emit(&csv, out),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rates(args) => rates(args),
        Command::Constellation(args) => constellation(args),
        Command::Simulate(args) => simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmqkd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
