//! Gaussian spectral probes, their discretization, and the time-domain dual.
//!
//! The probe amplitude is `f(w) = (pi d^2)^{-1/4} exp[-(w - w0)^2 / 2 d^2]`,
//! so the power spectrum `|f|^2` has mean `w0` and variance `d^2 / 2`.
//! Everything here is in SI units: rad/s, s, m.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;
use crate::units::{angular_frequency, SPEED_OF_LIGHT};

pub const DEFAULT_SPAN_SIGMAS: f64 = 8.0;
pub const DEFAULT_GRID_POINTS: usize = 1 << 14;
pub const MIN_SPAN_SIGMAS: f64 = 4.0;
pub const MIN_GRID_POINTS: usize = 1 << 10;

/// Lowest frequency a grid may reach, as a fraction of `delta`.
const POSITIVE_FREQUENCY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    omega0: f64,
    delta: f64,
}

/// Builds the Gaussian probe centered at `omega0` with spread `delta`.
pub fn gaussian_profile(omega0: f64, delta: f64) -> Result<SpectralProfile> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::param(
            "omega0",
            format!("must be positive, got {omega0}"),
        ));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::param(
            "delta",
            format!("must be positive, got {delta}"),
        ));
    }
    Ok(SpectralProfile { omega0, delta })
}

impl SpectralProfile {
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Peak value of `|f|^2`, `(pi d^2)^{-1/2}`.
    pub fn peak_density(&self) -> f64 {
        (std::f64::consts::PI * self.delta * self.delta)
            .sqrt()
            .recip()
    }

    /// `f(omega)`.
    pub fn amplitude(&self, omega: f64) -> f64 {
        self.amplitude_at_offset(omega - self.omega0)
    }

    pub fn amplitude_at_offset(&self, offset: f64) -> f64 {
        let u = offset / self.delta;
        self.peak_density().sqrt() * (-0.5 * u * u).exp()
    }

    /// `|f(omega)|^2`.
    pub fn density(&self, omega: f64) -> f64 {
        self.density_at_offset(omega - self.omega0)
    }

    pub fn density_at_offset(&self, offset: f64) -> f64 {
        let u = offset / self.delta;
        self.peak_density() * (-u * u).exp()
    }

    /// Variance of `|f|^2`.
    pub fn power_variance(&self) -> f64 {
        0.5 * self.delta * self.delta
    }
}

/// How a quoted spectral width in wavelength maps onto `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WidthConvention {
    /// `delta = 2 pi c dlambda / lambda0^2`: the width is the amplitude spread.
    #[default]
    AmplitudeSpread,
    /// The width is the FWHM of the power spectrum `|f|^2`.
    IntensityFwhm,
}

impl WidthConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            WidthConvention::AmplitudeSpread => "amplitude-spread",
            WidthConvention::IntensityFwhm => "intensity-fwhm",
        }
    }

    /// `delta` divided by the first-order dispersion width `2 pi c dlambda / lambda0^2`.
    pub fn delta_per_dispersion_width(&self) -> f64 {
        match self {
            WidthConvention::AmplitudeSpread => 1.0,
            // |f|^2 ~ exp(-x^2/d^2) has FWHM 2 sqrt(ln 2) d
            WidthConvention::IntensityFwhm => 0.5 / std::f64::consts::LN_2.sqrt(),
        }
    }
}

impl fmt::Display for WidthConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WidthConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "amplitude-spread" => Ok(WidthConvention::AmplitudeSpread),
            "intensity-fwhm" => Ok(WidthConvention::IntensityFwhm),
            other => Err(Error::param(
                "width_convention",
                format!("expected amplitude-spread or intensity-fwhm, got `{other}`"),
            )),
        }
    }
}

/// Profile for a source centered at vacuum wavelength `lambda0` with width
/// `delta_lambda` (both meters).
pub fn from_wavelength(
    lambda0: f64,
    delta_lambda: f64,
    convention: WidthConvention,
) -> Result<SpectralProfile> {
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(Error::param(
            "center_wavelength",
            format!("must be positive, got {lambda0}"),
        ));
    }
    if !(delta_lambda.is_finite() && delta_lambda > 0.0 && delta_lambda < lambda0) {
        return Err(Error::param(
            "spectral_width",
            format!("must lie in (0, {lambda0}), got {delta_lambda}"),
        ));
    }
    let omega0 = angular_frequency(lambda0);
    let dispersion_width =
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT * delta_lambda / (lambda0 * lambda0);
    gaussian_profile(
        omega0,
        dispersion_width * convention.delta_per_dispersion_width(),
    )
}

/// Time-domain probe `g(t) = (pi s^2)^{-1/4} exp(-t^2 / 2 s^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeDomainProbe {
    pub sigma: f64,
}

impl TimeDomainProbe {
    pub fn amplitude(&self, t: f64) -> f64 {
        let u = t / self.sigma;
        (std::f64::consts::PI * self.sigma * self.sigma).powf(-0.25) * (-0.5 * u * u).exp()
    }

    /// Spectral profile whose dual this probe is, centered at `omega0`.
    pub fn spectral_dual(&self, omega0: f64) -> Result<SpectralProfile> {
        gaussian_profile(omega0, self.sigma.recip())
    }
}

/// Fourier-dual pulse of the spectral envelope: `sigma = 1 / delta`.
pub fn time_domain_dual(profile: &SpectralProfile) -> TimeDomainProbe {
    TimeDomainProbe {
        sigma: profile.delta.recip(),
    }
}

/// Uniformly sampled spectrum.
///
/// Frequencies are stored as offsets from a reference frequency so that
/// moments about the line center do not lose digits to `omega0 ~ 1e15`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    reference: f64,
    offsets: Vec<f64>,
    weights: Vec<f64>,
    bin_width: f64,
}

impl SpectralGrid {
    /// Grid from explicit absolute frequencies and weights.
    pub fn new(omegas: &[f64], weights: Vec<f64>) -> Result<Self> {
        if omegas.len() != weights.len() {
            return Err(Error::param("weights", "length must match the frequencies"));
        }
        if omegas.is_empty() {
            return Err(Error::param("omegas", "grid needs at least one sample"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::param("weights", "must be finite and nonnegative"));
        }
        let reference = omegas[0];
        let offsets: Vec<f64> = omegas.iter().map(|w| w - reference).collect();
        let bin_width = if offsets.len() > 1 { offsets[1] } else { 0.0 };
        for (k, pair) in offsets.windows(2).enumerate() {
            let step = pair[1] - pair[0];
            if !(step > 0.0) {
                return Err(Error::param("omegas", "must be strictly increasing"));
            }
            let expected = (k + 1) as f64 * bin_width;
            if (pair[1] - expected).abs() > 1e-9 * bin_width * (k + 1) as f64 {
                return Err(Error::param("omegas", "must be uniformly spaced"));
            }
        }
        Ok(SpectralGrid {
            reference,
            offsets,
            weights,
            bin_width,
        })
    }

    /// Same support, new weights.
    pub(crate) fn with_weights(&self, weights: Vec<f64>) -> SpectralGrid {
        debug_assert_eq!(weights.len(), self.offsets.len());
        SpectralGrid {
            reference: self.reference,
            offsets: self.offsets.clone(),
            weights,
            bin_width: self.bin_width,
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn reference(&self) -> f64 {
        self.reference
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn omega(&self, index: usize) -> f64 {
        self.reference + self.offsets[index]
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.offsets.iter().map(|x| self.reference + x).collect()
    }

    pub fn low(&self) -> f64 {
        self.omega(0)
    }

    pub fn high(&self) -> f64 {
        self.omega(self.len() - 1)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .total()
    }
}

/// Samples `|f|^2` on `[w0 - span d, w0 + span d]`, clipped to positive frequencies.
pub fn sample_grid(
    profile: &SpectralProfile,
    span_sigmas: f64,
    n_points: usize,
) -> Result<SpectralGrid> {
    if !(span_sigmas.is_finite() && span_sigmas >= MIN_SPAN_SIGMAS) {
        return Err(Error::param(
            "grid_span",
            format!("must be at least {MIN_SPAN_SIGMAS}, got {span_sigmas}"),
        ));
    }
    if n_points < MIN_GRID_POINTS {
        return Err(Error::param(
            "grid_points",
            format!("must be at least {MIN_GRID_POINTS}, got {n_points}"),
        ));
    }
    let SpectralProfile { omega0, delta } = *profile;
    let half_span = span_sigmas * delta;
    let floor = delta * POSITIVE_FREQUENCY_FLOOR;
    let last = (n_points - 1) as f64;

    let (offsets, bin_width): (Vec<f64>, f64) = if omega0 - half_span >= floor {
        // Symmetric about omega0: offsets come in exact +/- pairs.
        let h = 2.0 * half_span / last;
        let mid = 0.5 * last;
        let offsets = (0..n_points).map(|k| (k as f64 - mid) * h).collect();
        (offsets, h)
    } else {
        let start = floor - omega0;
        let h = (half_span - start) / last;
        let offsets = (0..n_points).map(|k| start + k as f64 * h).collect();
        (offsets, h)
    };
    let weights = offsets
        .iter()
        .map(|&x| profile.density_at_offset(x) * bin_width)
        .collect();
    Ok(SpectralGrid {
        reference: omega0,
        offsets,
        weights,
        bin_width,
    })
}

/// Default grid: 8 spreads each side, 2^14 points.
pub fn default_grid(profile: &SpectralProfile) -> SpectralGrid {
    sample_grid(profile, DEFAULT_SPAN_SIGMAS, DEFAULT_GRID_POINTS)
        .expect("default grid parameters are valid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Mean offset from the grid reference and the variance of the weights.
pub(crate) fn centered_moments(offsets: &[f64], weights: &[f64]) -> Result<(f64, f64, f64)> {
    let total = weights.iter().copied().collect::<CompensatedSum>().total();
    if !(total > 0.0) {
        return Err(Error::EmptySpectrum);
    }
    let first: CompensatedSum = offsets.iter().zip(weights).map(|(x, w)| x * w).collect();
    let mean_offset = first.total() / total;
    let second: CompensatedSum = offsets
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            let d = x - mean_offset;
            d * d * w
        })
        .collect();
    Ok((total, mean_offset, second.total() / total))
}

/// Weighted mean and variance of the grid.
pub fn grid_moments(grid: &SpectralGrid) -> Result<Moments> {
    let (_, mean_offset, variance) = centered_moments(&grid.offsets, &grid.weights)?;
    Ok(Moments {
        mean: grid.reference + mean_offset,
        variance,
    })
}
