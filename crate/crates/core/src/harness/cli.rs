//! Command-line parsing and exit codes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::commands::{cmd_estimate, cmd_figure2, cmd_figure3, cmd_simulate, output_path};
use super::config::RunConfig;
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "weakphase",
    version,
    about = "Frequency-domain weak-value delay estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Postselection probability vs delay (CSV).
    Figure2(CommonArgs),
    /// Shift and gain panels (four CSVs in the --out directory).
    Figure3(CommonArgs),
    /// Single-point measurement report (JSON).
    Simulate(CommonArgs),
    /// Monte Carlo delay estimation study (JSON).
    Estimate(CommonArgs),
}

/// Flags shared by every command; each overrides the matching config key.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Key-value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (directory for figure3).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Postselection angle (rad).
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<String>,
    /// Delay (as).
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<String>,
    #[arg(long)]
    pub center_wavelength_nm: Option<String>,
    #[arg(long)]
    pub spectral_width_nm: Option<String>,
    /// amplitude-spread | intensity-fwhm
    #[arg(long)]
    pub width_convention: Option<String>,
    #[arg(long)]
    pub grid_points: Option<String>,
    /// Grid half-span in spreads.
    #[arg(long)]
    pub grid_span: Option<String>,
    #[arg(long)]
    pub n_trials: Option<String>,
    #[arg(long)]
    pub photon_budget: Option<String>,
    /// weak-limit | exact-invert
    #[arg(long)]
    pub method: Option<String>,
    /// poisson | expected
    #[arg(long)]
    pub noise: Option<String>,
    /// Any other config key, as KEY=VALUE; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl CommonArgs {
    /// File first, then flags on top.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("seed", &self.seed),
            ("epsilon", &self.epsilon),
            ("tau_as", &self.tau),
            ("center_wavelength_nm", &self.center_wavelength_nm),
            ("spectral_width_nm", &self.spectral_width_nm),
            ("width_convention", &self.width_convention),
            ("grid_points", &self.grid_points),
            ("grid_span", &self.grid_span),
            ("n_trials", &self.n_trials),
            ("photon_budget", &self.photon_budget),
            ("method", &self.method),
            ("noise", &self.noise),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        for pair in &self.set {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{pair}`")))?;
            config.set(key, value)?;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        config.validate()?;
        Ok(config)
    }
}

/// Which exit code an error maps to in the given phase.
pub fn exit_code(error: &Error, configuring: bool) -> i32 {
    match error {
        Error::Io { .. } => EXIT_IO,
        _ if configuring => EXIT_CONFIG,
        Error::Config(_) | Error::UnknownKey(_) => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn report_error(error: &Error, configuring: bool) -> i32 {
    eprintln!("error: {}: {error}", error.kind());
    exit_code(error, configuring)
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (args, command) = match &cli.command {
        Command::Figure2(a) => (a, "figure2"),
        Command::Figure3(a) => (a, "figure3"),
        Command::Simulate(a) => (a, "simulate"),
        Command::Estimate(a) => (a, "estimate"),
    };
    let config = match args.resolve() {
        Ok(c) => c,
        Err(e) => return report_error(&e, true),
    };
    match execute(command, &config) {
        Ok(()) => EXIT_OK,
        Err(e) => report_error(&e, false),
    }
}

fn execute(command: &str, config: &RunConfig) -> Result<()> {
    let out = |default: &str| output_path(None, config, default);
    match command {
        "figure2" => {
            let path = out("figure2.csv");
            let table = cmd_figure2(config, &path)?;
            println!("figure2: {} rows -> {}", table.rows().len(), path.display());
        }
        "figure3" => {
            let dir = out("figure3");
            let figure = cmd_figure3(config, &dir)?;
            for (name, table) in figure.tables() {
                println!(
                    "figure3: {} rows -> {}",
                    table.rows().len(),
                    dir.join(name).display()
                );
            }
        }
        "simulate" => {
            let path = out("simulate.json");
            let r = cmd_simulate(config, &path)?;
            let m = &r.measurement;
            println!(
                "T = {:.6e}, shift = {:.6e} rad/s, weak-limit shift = {:.6e} rad/s, {:?}/{:?} -> {}",
                m.probability,
                m.shift,
                m.weak_limit_shift,
                m.linearity,
                m.coherence,
                path.display()
            );
        }
        "estimate" => {
            let path = out("estimate.json");
            let r = cmd_estimate(config, &path)?;
            let e = &r.estimation;
            println!(
                "tau_hat = {:.6e} s, bias = {:.3e} s, std = {:.3e} s over {} trials ({} failed) -> {}",
                e.tau_hat,
                e.bias,
                e.std,
                e.n_trials,
                e.n_failed,
                path.display()
            );
            for w in &e.warnings {
                eprintln!("warning: {w}");
            }
        }
        _ => unreachable!("clap restricts commands"),
    }
    Ok(())
}
