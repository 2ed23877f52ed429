//! Key-value run configuration.
//!
//! Files hold `key = value` lines (`#` starts a comment). Physical values are
//! written in human units and converted to SI once, here.

use std::fs;
use std::path::{Path, PathBuf};

use crate::amplification::{CouplingParams, DEFAULT_ENVELOPE_THRESHOLD};
use crate::detection::{
    DetectorModel, InversionMethod, NoiseMode, StudyOptions, DEFAULT_PHOTON_BUDGET, DEFAULT_PIXELS,
    DEFAULT_RESOLUTION_FRACTION,
};
use crate::error::{Error, Result};
use crate::spectral::{
    from_wavelength, sample_grid, SpectralProfile, WidthConvention, DEFAULT_GRID_POINTS,
    DEFAULT_SPAN_SIGMAS,
};
use crate::units::{ATTOSECOND, NANOMETER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

/// Delay sweep in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: SweepScale,
}

impl TauSweep {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        match self.scale {
            SweepScale::Linear => (0..self.count)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / last)
                .collect(),
            SweepScale::Log => {
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..self.count)
                    .map(|k| (a + (b - a) * k as f64 / last).exp())
                    .collect()
            }
        }
    }
}

/// Everything a command needs, in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub center_wavelength: f64,
    pub spectral_width: f64,
    pub width_convention: WidthConvention,
    pub epsilon: f64,
    pub tau: f64,
    pub tau_start: Option<f64>,
    pub tau_stop: Option<f64>,
    pub tau_count: Option<usize>,
    pub tau_scale: Option<SweepScale>,
    pub grid_span: f64,
    pub grid_points: usize,
    pub envelope_threshold: f64,
    pub n_pixels: usize,
    /// Instrument response width as a fraction of `delta`.
    pub resolution_fraction: f64,
    /// rad/s
    pub alignment_offset: f64,
    pub photon_budget: f64,
    pub noise: NoiseMode,
    pub n_trials: usize,
    pub method: InversionMethod,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            center_wavelength: 600.0 * NANOMETER,
            spectral_width: 100.0 * NANOMETER,
            width_convention: WidthConvention::AmplitudeSpread,
            epsilon: 0.01,
            tau: 10.0 * ATTOSECOND,
            tau_start: None,
            tau_stop: None,
            tau_count: None,
            tau_scale: None,
            grid_span: DEFAULT_SPAN_SIGMAS,
            grid_points: DEFAULT_GRID_POINTS,
            envelope_threshold: DEFAULT_ENVELOPE_THRESHOLD,
            n_pixels: DEFAULT_PIXELS,
            resolution_fraction: DEFAULT_RESOLUTION_FRACTION,
            alignment_offset: 0.0,
            photon_budget: DEFAULT_PHOTON_BUDGET,
            noise: NoiseMode::Poisson,
            n_trials: 200,
            method: InversionMethod::ExactInvert,
            seed: 0,
            out: None,
        }
    }
}

/// Recognized keys, with the unit their value is written in.
pub const KEYS: &[(&str, &str)] = &[
    ("center_wavelength_nm", "nm"),
    ("spectral_width_nm", "nm"),
    ("width_convention", "amplitude-spread | intensity-fwhm"),
    ("epsilon", "rad"),
    ("tau_as", "as"),
    ("tau_start_as", "as"),
    ("tau_stop_as", "as"),
    ("tau_count", "points"),
    ("tau_scale", "linear | log"),
    ("grid_span", "spreads"),
    ("grid_points", "points"),
    ("envelope_threshold", "1"),
    ("n_pixels", "pixels"),
    ("resolution_fraction", "fraction of delta"),
    ("alignment_offset", "rad/s"),
    ("photon_budget", "photons"),
    ("noise", "poisson | expected"),
    ("n_trials", "trials"),
    ("method", "weak-limit | exact-invert"),
    ("seed", "integer"),
    ("out", "path"),
];

fn bad(key: &str, value: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("key `{key}`: cannot use `{value}`: {reason}"))
}

fn number(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value.parse().map_err(|e| bad(key, value, e))?;
    if !v.is_finite() {
        return Err(bad(key, value, "must be finite"));
    }
    Ok(v)
}

fn count(key: &str, value: &str) -> Result<usize> {
    value.parse().map_err(|e| bad(key, value, e))
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "center_wavelength_nm" => self.center_wavelength = number(key, value)? * NANOMETER,
            "spectral_width_nm" => self.spectral_width = number(key, value)? * NANOMETER,
            "width_convention" => {
                self.width_convention = value.parse().map_err(|e| bad(key, value, e))?
            }
            "epsilon" => self.epsilon = number(key, value)?,
            "tau_as" => self.tau = number(key, value)? * ATTOSECOND,
            "tau_start_as" => self.tau_start = Some(number(key, value)? * ATTOSECOND),
            "tau_stop_as" => self.tau_stop = Some(number(key, value)? * ATTOSECOND),
            "tau_count" => self.tau_count = Some(count(key, value)?),
            "tau_scale" => {
                self.tau_scale = Some(match value {
                    "linear" => SweepScale::Linear,
                    "log" => SweepScale::Log,
                    _ => return Err(bad(key, value, "expected linear or log")),
                })
            }
            "grid_span" => self.grid_span = number(key, value)?,
            "grid_points" => self.grid_points = count(key, value)?,
            "envelope_threshold" => self.envelope_threshold = number(key, value)?,
            "n_pixels" => self.n_pixels = count(key, value)?,
            "resolution_fraction" => self.resolution_fraction = number(key, value)?,
            "alignment_offset" => self.alignment_offset = number(key, value)?,
            "photon_budget" => self.photon_budget = number(key, value)?,
            "noise" => self.noise = value.parse().map_err(|e| bad(key, value, e))?,
            "n_trials" => self.n_trials = count(key, value)?,
            "method" => self.method = value.parse().map_err(|e| bad(key, value, e))?,
            "seed" => self.seed = value.parse().map_err(|e| bad(key, value, e))?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Parses config text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        config.apply_text(text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    number + 1
                ))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Checks every physical field against the library preconditions.
    pub fn validate(&self) -> Result<()> {
        let profile = self.profile()?;
        if !(self.epsilon > 0.0 && self.epsilon <= std::f64::consts::FRAC_PI_2) {
            return Err(bad(
                "epsilon",
                &self.epsilon.to_string(),
                "must lie in (0, pi/2]",
            ));
        }
        CouplingParams::new(self.tau, self.epsilon)?;
        sample_grid(&profile, self.grid_span, self.grid_points)?;
        if !(self.envelope_threshold > 0.0 && self.envelope_threshold < 1.0) {
            return Err(bad(
                "envelope_threshold",
                &self.envelope_threshold.to_string(),
                "must lie in (0, 1)",
            ));
        }
        if !(self.resolution_fraction >= 0.0) {
            return Err(bad(
                "resolution_fraction",
                &self.resolution_fraction.to_string(),
                "must be >= 0",
            ));
        }
        self.detector(&profile)?;
        if self.n_trials < 2 {
            return Err(bad(
                "n_trials",
                &self.n_trials.to_string(),
                "need at least 2",
            ));
        }
        if let Some(sweep) = self.tau_sweep(None)? {
            if sweep.count == 0 {
                return Err(bad("tau_count", "0", "need at least one point"));
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<SpectralProfile> {
        from_wavelength(
            self.center_wavelength,
            self.spectral_width,
            self.width_convention,
        )
    }

    /// Same source with a different quoted width.
    pub fn profile_with_width(&self, spectral_width: f64) -> Result<SpectralProfile> {
        from_wavelength(
            self.center_wavelength,
            spectral_width,
            self.width_convention,
        )
    }

    pub fn params(&self) -> Result<CouplingParams> {
        CouplingParams::new(self.tau, self.epsilon)
    }

    pub fn detector(&self, profile: &SpectralProfile) -> Result<DetectorModel> {
        Ok(DetectorModel::centered(
            self.n_pixels,
            profile.omega0(),
            self.grid_span * profile.delta(),
            self.resolution_fraction * profile.delta(),
            self.alignment_offset,
            self.photon_budget,
        )?
        .with_noise(self.noise))
    }

    pub fn study_options(&self) -> StudyOptions {
        StudyOptions {
            method: self.method,
            grid_span: self.grid_span,
            grid_points: self.grid_points,
            ..StudyOptions::default()
        }
    }

    /// The configured delay sweep, falling back to `default` for unset fields.
    /// Returns `None` when neither supplies a complete sweep.
    pub fn tau_sweep(&self, default: Option<TauSweep>) -> Result<Option<TauSweep>> {
        let any_set = self.tau_start.is_some()
            || self.tau_stop.is_some()
            || self.tau_count.is_some()
            || self.tau_scale.is_some();
        let base = match (default, any_set) {
            (Some(d), _) => d,
            (None, false) => return Ok(None),
            (None, true) => TauSweep {
                start: 0.0,
                stop: 100.0 * ATTOSECOND,
                count: 201,
                scale: SweepScale::Linear,
            },
        };
        let sweep = TauSweep {
            start: self.tau_start.unwrap_or(base.start),
            stop: self.tau_stop.unwrap_or(base.stop),
            count: self.tau_count.unwrap_or(base.count),
            scale: self.tau_scale.unwrap_or(base.scale),
        };
        if sweep.count == 0 {
            return Err(bad("tau_count", "0", "need at least one point"));
        }
        if !(sweep.start.is_finite() && sweep.stop.is_finite() && sweep.start <= sweep.stop) {
            return Err(bad(
                "tau_stop_as",
                &(sweep.stop / ATTOSECOND).to_string(),
                "sweep must run upwards",
            ));
        }
        if sweep.scale == SweepScale::Log && !(sweep.start > 0.0) {
            return Err(bad(
                "tau_start_as",
                &(sweep.start / ATTOSECOND).to_string(),
                "log sweep needs a positive start",
            ));
        }
        Ok(Some(sweep))
    }

    /// `key = value` lines describing this config, for output metadata.
    pub fn describe(&self) -> Vec<(String, String)> {
        vec![
            (
                "center_wavelength_m".into(),
                format!("{:e}", self.center_wavelength),
            ),
            (
                "spectral_width_m".into(),
                format!("{:e}", self.spectral_width),
            ),
            ("width_convention".into(), self.width_convention.to_string()),
            ("epsilon_rad".into(), format!("{}", self.epsilon)),
            ("grid_span".into(), format!("{}", self.grid_span)),
            ("grid_points".into(), format!("{}", self.grid_points)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.tau, 1e-17);
    }

    #[test]
    fn parses_human_units() {
        let c = RunConfig::parse(
            "# comment\ncenter_wavelength_nm = 800\nspectral_width_nm=50 # trailing\n\
             tau_as = 2.5\nwidth_convention = intensity-fwhm\nmethod = weak-limit\nnoise = expected\n",
        )
        .unwrap();
        assert!((c.center_wavelength - 800e-9).abs() < 1e-20);
        assert!((c.spectral_width - 50e-9).abs() < 1e-20);
        assert!((c.tau - 2.5e-18).abs() < 1e-30);
        assert_eq!(c.width_convention, WidthConvention::IntensityFwhm);
        assert_eq!(c.method, InversionMethod::WeakLimit);
        assert_eq!(c.noise, NoiseMode::Expected);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = RunConfig::parse("epsilonn = 0.1").unwrap_err();
        assert_eq!(err.kind(), "unknown_config_key");
        assert!(err.to_string().contains("epsilonn"));
    }

    #[test]
    fn bad_value_names_the_key() {
        let err = RunConfig::parse("grid_points = many").unwrap_err();
        assert_eq!(err.kind(), "config_error");
        assert!(err.to_string().contains("grid_points"));
        assert!(RunConfig::parse("just words").is_err());
    }

    #[test]
    fn validation_catches_physics() {
        let mut c = RunConfig::default();
        c.set("spectral_width_nm", "700").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("epsilon", "0").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("grid_points", "100").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn sweeps() {
        let lin = TauSweep {
            start: 0.0,
            stop: 1.0,
            count: 5,
            scale: SweepScale::Linear,
        };
        assert_eq!(lin.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = TauSweep {
            start: 1e-20,
            stop: 1e-18,
            count: 3,
            scale: SweepScale::Log,
        };
        let p = log.points();
        assert!((p[1] / 1e-19 - 1.0).abs() < 1e-12);

        let mut c = RunConfig::default();
        assert_eq!(c.tau_sweep(None).unwrap(), None);
        c.set("tau_count", "11").unwrap();
        assert_eq!(c.tau_sweep(None).unwrap().unwrap().count, 11);
        c.set("tau_scale", "log").unwrap();
        assert!(c.tau_sweep(None).is_err());
    }
}
