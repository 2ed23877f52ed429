//! The four commands. Each computes its result through library calls only
//! and, in its `cmd_*` form, writes it to disk.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{RunConfig, SweepScale, TauSweep};
use super::table::{write_file, Column, SweepTable, SCHEMA_VERSION};
use crate::amplification::{
    amplification_factor, closed_form_probability, closed_form_shift, decoherence_envelope,
    measure, numeric_probability, numeric_shift, working_range, CouplingParams, MeasurementResult,
};
use crate::detection::{monte_carlo_study, EstimationReport};
use crate::error::{Error, Result};
use crate::spectral::{sample_grid, SpectralProfile};
use crate::units::{ATTOSECOND, FEMTOSECOND, NANOMETER};

/// Panel parameter sets.
pub const FIGURE3_EPSILONS: [f64; 3] = [0.01, 0.05, 0.10];
pub const FIGURE3_WIDTHS_NM: [f64; 3] = [10.0, 50.0, 100.0];
/// Delay held fixed in the gain panels.
pub const FIGURE3_GAIN_TAU: f64 = 10.0 * ATTOSECOND;
/// Rows with `d tau cot(eps) < 0.1` count as weak.
pub const WEAK_REGIME_PARAMETER: f64 = 0.1;

const FIGURE2_MIN_STOP: f64 = 20.0 * FEMTOSECOND;
const FIGURE2_MAIN_POINTS: usize = 4001;
const FIGURE2_INSET_POINTS: usize = 201;
const FIGURE2_LOG_POINTS: usize = 101;

fn base_metadata(table: &mut SweepTable, config: &RunConfig, profile: &SpectralProfile) {
    for (k, v) in config.describe() {
        table.meta(k, v);
    }
    table.meta("omega0_rad_per_s", format!("{:e}", profile.omega0()));
    table.meta("delta_rad_per_s", format!("{:e}", profile.delta()));
}

fn table_rows<F>(table: &mut SweepTable, inputs: &[f64], row: F) -> Result<()>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    // Parallel over rows; collect keeps parameter order.
    let rows: Vec<Result<Vec<f64>>> = inputs.par_iter().map(|&x| row(x)).collect();
    for r in rows {
        table.push(r?)?;
    }
    Ok(())
}

fn sorted_unique(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

/// Delays sampled for the probability-vs-delay figure: a dense linear sweep
/// to full decoherence, a log sweep resolving small delays, and the inset
/// `[0, tau_max_weak]`.
pub fn figure2_delays(config: &RunConfig, profile: &SpectralProfile) -> Result<Vec<f64>> {
    let range = working_range(profile, config.epsilon, config.envelope_threshold)?;
    let stop = FIGURE2_MIN_STOP.max(8.0 / profile.delta());
    let main = config
        .tau_sweep(Some(TauSweep {
            start: 0.0,
            stop,
            count: FIGURE2_MAIN_POINTS,
            scale: SweepScale::Linear,
        }))?
        .expect("default supplied");
    let mut delays = main.points();
    if main.scale == SweepScale::Linear {
        let log = TauSweep {
            start: 1e-3 * ATTOSECOND,
            stop: main.stop.max(2e-3 * ATTOSECOND),
            count: FIGURE2_LOG_POINTS,
            scale: SweepScale::Log,
        };
        delays.extend(log.points().into_iter().filter(|&t| t >= main.start));
    }
    let inset = TauSweep {
        start: 0.0,
        stop: range.tau_max_weak,
        count: FIGURE2_INSET_POINTS,
        scale: SweepScale::Linear,
    };
    delays.extend(inset.points());
    Ok(sorted_unique(delays))
}

/// Postselection probability against delay, closed form and grid oracle.
pub fn figure2(config: &RunConfig) -> Result<SweepTable> {
    config.validate()?;
    let profile = config.profile()?;
    let grid = sample_grid(&profile, config.grid_span, config.grid_points)?;
    let range = working_range(&profile, config.epsilon, config.envelope_threshold)?;
    let delays = figure2_delays(config, &profile)?;

    let mut table = SweepTable::new(
        "figure2",
        vec![
            Column::new("tau_s", "s"),
            Column::new("T_closed", "1"),
            Column::new("T_numeric", "1"),
            Column::new("envelope", "1"),
        ],
    );
    base_metadata(&mut table, config, &profile);
    table.meta("tau_max_weak_s", format!("{:e}", range.tau_max_weak));
    table.meta("envelope_threshold", range.envelope_threshold);
    table_rows(&mut table, &delays, |tau| {
        let params = CouplingParams::new(tau, config.epsilon)?;
        Ok(vec![
            tau,
            closed_form_probability(&profile, &params),
            numeric_probability(&params, &grid),
            decoherence_envelope(&profile, tau),
        ])
    })?;
    Ok(table)
}

pub fn cmd_figure2(config: &RunConfig, out: &Path) -> Result<SweepTable> {
    let table = figure2(config)?;
    table.write_csv(out)?;
    Ok(table)
}

/// The four shift and gain panels.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure3 {
    /// Shift vs delay for the three `eps` at the configured width.
    pub shift_vs_tau_by_epsilon: SweepTable,
    /// Shift vs delay for the three widths at the configured `eps`.
    pub shift_vs_tau_by_width: SweepTable,
    /// Gain vs width for the three `eps`.
    pub gain_vs_width: SweepTable,
    /// Gain vs `eps` for the three widths.
    pub gain_vs_epsilon: SweepTable,
}

impl Figure3 {
    pub fn tables(&self) -> [(&'static str, &SweepTable); 4] {
        [
            ("figure3_a.csv", &self.shift_vs_tau_by_epsilon),
            ("figure3_b.csv", &self.shift_vs_tau_by_width),
            ("figure3_c.csv", &self.gain_vs_width),
            ("figure3_d.csv", &self.gain_vs_epsilon),
        ]
    }
}

pub fn epsilon_label(eps: f64) -> String {
    format!("{eps:.2}")
}

fn weak_flag(delta_max: f64, tau: f64, eps_min: f64) -> f64 {
    if delta_max * tau / eps_min.tan() < WEAK_REGIME_PARAMETER {
        1.0
    } else {
        0.0
    }
}

pub fn figure3(config: &RunConfig) -> Result<Figure3> {
    config.validate()?;
    let profile = config.profile()?;
    let delays = config
        .tau_sweep(Some(TauSweep {
            start: 1e-2 * ATTOSECOND,
            stop: 100.0 * ATTOSECOND,
            count: 201,
            scale: SweepScale::Log,
        }))?
        .expect("default supplied")
        .points();
    let widths: Vec<SpectralProfile> = FIGURE3_WIDTHS_NM
        .iter()
        .map(|&w| config.profile_with_width(w * NANOMETER))
        .collect::<Result<_>>()?;
    let shift = |p: &SpectralProfile, tau: f64, eps: f64| -> Result<f64> {
        closed_form_shift(p, &CouplingParams::new(tau, eps)?)
    };
    let gain = |p: &SpectralProfile, tau: f64, eps: f64| -> Result<f64> {
        amplification_factor(p, &CouplingParams::new(tau, eps)?)
    };

    // (a)
    let mut columns = vec![Column::new("tau_s", "s")];
    columns.extend(
        FIGURE3_EPSILONS
            .iter()
            .map(|&e| Column::new(format!("shift_eps_{}", epsilon_label(e)), "rad/s")),
    );
    columns.push(Column::new("weak_regime", "flag"));
    let mut a = SweepTable::new("figure3_a", columns);
    base_metadata(&mut a, config, &profile);
    a.meta("weak_regime_rule", "delta tau cot(eps_min) < 0.1");
    let eps_min = FIGURE3_EPSILONS[0];
    table_rows(&mut a, &delays, |tau| {
        let mut row = vec![tau];
        for &e in &FIGURE3_EPSILONS {
            row.push(shift(&profile, tau, e)?);
        }
        row.push(weak_flag(profile.delta(), tau, eps_min));
        Ok(row)
    })?;

    // (b)
    let mut columns = vec![Column::new("tau_s", "s")];
    columns.extend(
        FIGURE3_WIDTHS_NM
            .iter()
            .map(|&w| Column::new(format!("shift_width_{w:.0}nm"), "rad/s")),
    );
    columns.push(Column::new("weak_regime", "flag"));
    let mut b = SweepTable::new("figure3_b", columns);
    base_metadata(&mut b, config, &profile);
    b.meta("weak_regime_rule", "delta_max tau cot(eps) < 0.1");
    let delta_max = widths.iter().map(|p| p.delta()).fold(0.0, f64::max);
    table_rows(&mut b, &delays, |tau| {
        let mut row = vec![tau];
        for p in &widths {
            row.push(shift(p, tau, config.epsilon)?);
        }
        row.push(weak_flag(delta_max, tau, config.epsilon));
        Ok(row)
    })?;

    // (c)
    let width_sweep: Vec<f64> = sorted_unique(
        (0..=140)
            .map(|k| (10.0 + k as f64) * NANOMETER)
            .chain(FIGURE3_WIDTHS_NM.iter().map(|&w| w * NANOMETER))
            .collect(),
    );
    let mut columns = vec![
        Column::new("spectral_width_m", "m"),
        Column::new("delta", "rad/s"),
    ];
    columns.extend(
        FIGURE3_EPSILONS
            .iter()
            .map(|&e| Column::new(format!("gain_eps_{}", epsilon_label(e)), "1")),
    );
    let mut c = SweepTable::new("figure3_c", columns);
    base_metadata(&mut c, config, &profile);
    c.meta("tau_s", format!("{:e}", FIGURE3_GAIN_TAU));
    table_rows(&mut c, &width_sweep, |width| {
        let p = config.profile_with_width(width)?;
        let mut row = vec![width, p.delta()];
        for &e in &FIGURE3_EPSILONS {
            row.push(gain(&p, FIGURE3_GAIN_TAU, e)?);
        }
        Ok(row)
    })?;

    // (d)
    let eps_sweep = sorted_unique(
        TauSweep {
            start: 1e-3,
            stop: 1.0,
            count: 181,
            scale: SweepScale::Log,
        }
        .points()
        .into_iter()
        .chain(FIGURE3_EPSILONS)
        .collect(),
    );
    let mut columns = vec![Column::new("epsilon", "rad")];
    columns.extend(
        FIGURE3_WIDTHS_NM
            .iter()
            .map(|&w| Column::new(format!("gain_width_{w:.0}nm"), "1")),
    );
    columns.push(Column::new("cot_epsilon", "1"));
    let mut d = SweepTable::new("figure3_d", columns);
    base_metadata(&mut d, config, &profile);
    d.meta("tau_s", format!("{:e}", FIGURE3_GAIN_TAU));
    table_rows(&mut d, &eps_sweep, |eps| {
        let mut row = vec![eps];
        for p in &widths {
            row.push(gain(p, FIGURE3_GAIN_TAU, eps)?);
        }
        row.push(1.0 / eps.tan());
        Ok(row)
    })?;

    Ok(Figure3 {
        shift_vs_tau_by_epsilon: a,
        shift_vs_tau_by_width: b,
        gain_vs_width: c,
        gain_vs_epsilon: d,
    })
}

/// Writes the four panels into directory `out`.
pub fn cmd_figure3(config: &RunConfig, out: &Path) -> Result<Figure3> {
    let figure = figure3(config)?;
    for (name, table) in figure.tables() {
        table.write_csv(&out.join(name))?;
    }
    Ok(figure)
}

/// Flat single-point report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub center_wavelength_m: f64,
    pub spectral_width_m: f64,
    pub width_convention: String,
    pub omega0: f64,
    pub delta: f64,
    pub tau: f64,
    pub epsilon: f64,
    #[serde(flatten)]
    pub measurement: MeasurementResult,
    pub numeric_probability: f64,
    pub numeric_shift: f64,
    /// `shift / weak_limit_shift`; absent when the weak-limit shift is zero.
    pub shift_to_weak_limit: Option<f64>,
    pub probability_to_weak_limit: f64,
    pub tau_max_weak: f64,
    pub linearity_bound: f64,
    pub envelope_threshold: f64,
}

pub fn simulate(config: &RunConfig) -> Result<SimulationReport> {
    config.validate()?;
    let profile = config.profile()?;
    let params = config.params()?;
    let grid = sample_grid(&profile, config.grid_span, config.grid_points)?;
    let measurement = measure(&profile, &params)?;
    let range = working_range(&profile, config.epsilon, config.envelope_threshold)?;
    let shift_to_weak_limit = (measurement.weak_limit_shift != 0.0)
        .then(|| measurement.shift / measurement.weak_limit_shift);
    Ok(SimulationReport {
        schema_version: SCHEMA_VERSION,
        command: "simulate",
        center_wavelength_m: config.center_wavelength,
        spectral_width_m: config.spectral_width,
        width_convention: config.width_convention.to_string(),
        omega0: profile.omega0(),
        delta: profile.delta(),
        tau: params.tau,
        epsilon: params.epsilon,
        numeric_probability: numeric_probability(&params, &grid),
        numeric_shift: numeric_shift(&params, &grid)?,
        shift_to_weak_limit,
        probability_to_weak_limit: measurement.probability / measurement.weak_limit_probability,
        tau_max_weak: range.tau_max_weak,
        linearity_bound: range.linearity_bound,
        envelope_threshold: range.envelope_threshold,
        measurement,
    })
}

pub fn cmd_simulate(config: &RunConfig, out: &Path) -> Result<SimulationReport> {
    let report = simulate(config)?;
    write_file(out, &to_json(&report)?)?;
    Ok(report)
}

/// Flat Monte Carlo report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub center_wavelength_m: f64,
    pub spectral_width_m: f64,
    pub width_convention: String,
    pub omega0: f64,
    pub delta: f64,
    pub n_pixels: usize,
    pub resolution_sigma: f64,
    pub alignment_offset: f64,
    pub grid_span: f64,
    pub grid_points: usize,
    #[serde(flatten)]
    pub estimation: EstimationReport,
}

pub fn estimate(config: &RunConfig) -> Result<EstimateReport> {
    config.validate()?;
    let profile = config.profile()?;
    let params = config.params()?;
    let model = config.detector(&profile)?;
    let estimation = monte_carlo_study(
        &profile,
        &params,
        &model,
        config.n_trials,
        config.seed,
        &config.study_options(),
    )?;
    Ok(EstimateReport {
        schema_version: SCHEMA_VERSION,
        command: "estimate",
        center_wavelength_m: config.center_wavelength,
        spectral_width_m: config.spectral_width,
        width_convention: config.width_convention.to_string(),
        omega0: profile.omega0(),
        delta: profile.delta(),
        n_pixels: model.n_pixels(),
        resolution_sigma: model.resolution_sigma,
        alignment_offset: model.alignment_offset,
        grid_span: config.grid_span,
        grid_points: config.grid_points,
        estimation,
    })
}

pub fn cmd_estimate(config: &RunConfig, out: &Path) -> Result<EstimateReport> {
    let report = estimate(config)?;
    write_file(out, &to_json(&report)?)?;
    Ok(report)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidState(format!("report serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Output location: explicit path, else the config's `out`, else `default`.
pub fn output_path(explicit: Option<&Path>, config: &RunConfig, default: &str) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from(default))
}
