//! Command-line front end for the ambient-space attitude simulator.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | `check` found a failing check |
//! | 2 | usage or configuration error |
//! | 3 | the state became non-finite |
//! | 4 | output could not be written |

pub mod check;
pub mod config;
pub mod csvio;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use ambient_attitude::{roa_sweep, scenarios, simulate, Error, InitSampler, Outcome, SimConfigd};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NON_FINITE: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "attitude-sim", version, about = "Ambient-space attitude stabilization simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Ideal,
    Offmanifold,
    Antipodal,
}

impl Scenario {
    pub fn config(self) -> SimConfigd {
        match self {
            Self::Ideal => scenarios::ideal(),
            Self::Offmanifold => scenarios::off_manifold(),
            Self::Antipodal => scenarios::antipodal(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerKind {
    /// Random starts in the admissible region around SO(3).
    Admissible,
    /// Every trial starts from the configured initial state.
    Fixed,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Source {
    /// Built-in scenario used as the base configuration.
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    /// `key = value` file applied on top of the scenario (or of `ideal`).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrates one trajectory and writes it as CSV.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs many trials and classifies where each one ends.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "admissible")]
        sampler: SamplerKind,
        /// Radius of the ball the admissible sampler draws `Ω` from.
        #[arg(long, default_value_t = 1.0)]
        omega_max: f64,
    },
    /// Runs the numerical self-checks.
    Check {
        /// Reverses the attraction term in the descent check.
        #[arg(long, hide = true)]
        flip_correction_sign: bool,
        /// Uses this `ε` instead of the nominal one.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

fn load(source: &Source) -> Result<SimConfigd, String> {
    if source.scenario.is_none() && source.config.is_none() {
        return Err("one of --scenario or --config is required".into());
    }
    let base = source.scenario.unwrap_or(Scenario::Ideal).config();
    let mut cfg = match &source.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            config::parse_config(&text, &base).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => base,
    };
    if let Some(seed) = source.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, u8> {
    File::create(path).map(BufWriter::new).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO
    })
}

fn sim_error(e: Error) -> u8 {
    match e {
        Error::NonFiniteState { last_valid_t } => {
            eprintln!("error: state became non-finite; last valid t = {last_valid_t}");
            EXIT_NON_FINITE
        }
        other => {
            eprintln!("error: {other}");
            EXIT_USAGE
        }
    }
}

fn cmd_simulate(source: &Source, out: &Path) -> u8 {
    let cfg = match load(source) {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_USAGE;
        }
    };
    let rec = match simulate(&cfg) {
        Ok(r) => r,
        Err(e) => return sim_error(e),
    };
    let file = match create(out) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if let Err(e) = csvio::write_trajectory(file, &rec.samples) {
        eprintln!("error: {}: {e}", out.display());
        return EXIT_IO;
    }
    EXIT_OK
}

fn cmd_sweep(source: &Source, trials: usize, out: &Path, sampler: SamplerKind, omega_max: f64) -> u8 {
    if trials == 0 {
        eprintln!("error: --trials must be at least 1");
        return EXIT_USAGE;
    }
    if !(omega_max >= 0.0 && omega_max.is_finite()) {
        eprintln!("error: --omega-max must be finite and non-negative");
        return EXIT_USAGE;
    }
    let cfg = match load(source) {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_USAGE;
        }
    };
    let sampler = match sampler {
        SamplerKind::Admissible => InitSampler::admissible(cfg.gains.k_e, omega_max),
        SamplerKind::Fixed => InitSampler::Fixed,
    };
    let results = match roa_sweep(&cfg, trials, &sampler) {
        Ok(r) => r,
        Err(e) => return sim_error(e),
    };
    let file = match create(out) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if let Err(e) = csvio::write_sweep(file, &results) {
        eprintln!("error: {}: {e}", out.display());
        return EXIT_IO;
    }
    let count = |o: Outcome| results.iter().filter(|t| t.outcome == o).count();
    println!(
        "trials={} E1={} E2={} none={} diverged={}",
        results.len(),
        count(Outcome::E1),
        count(Outcome::E2),
        count(Outcome::Unclassified),
        count(Outcome::Diverged)
    );
    EXIT_OK
}

fn cmd_check(opts: &check::CheckOptions) -> u8 {
    let results = check::run_checks(opts);
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    if results.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Simulate { source, out } => cmd_simulate(&source, &out),
        Command::Sweep { source, trials, out, sampler, omega_max } => cmd_sweep(&source, trials, &out, sampler, omega_max),
        Command::Check { flip_correction_sign, epsilon } => cmd_check(&check::CheckOptions { flip_correction_sign, epsilon }),
    }
}
