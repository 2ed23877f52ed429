//! Post-selected spectra, postselection probability and centroid shift.
//!
//! Every quantity comes in two independent forms: a closed form for the
//! Gaussian probe, and a numerical integral over a [`SpectralGrid`]. The
//! post-selected power spectrum is `|f(w)|^2 sin^2(w tau + eps)`, giving
//!
//! ```text
//! T  = 1/2 {1 - exp(-d^2 tau^2) cos[2(w0 tau + eps)]}
//! dw = (tau d^2 / 2T) exp(-d^2 tau^2) sin[2(w0 tau + eps)]
//! ```
//!
//! and in the weak limit `T -> sin^2 eps`, `dw -> tau d^2 cot eps`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{centered_moments, SpectralGrid, SpectralProfile};
use crate::sum::CompensatedSum;

/// Division guard for the postselection probability.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

/// Smallest postselection angle accepted for estimation runs.
pub const DEFAULT_EPSILON_FLOOR: f64 = 1e-6;

/// Default envelope threshold for [`working_range`].
pub const DEFAULT_ENVELOPE_THRESHOLD: f64 = 0.99;

/// Coupling of one measurement: half the H/V delay and the postselection angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub tau: f64,
    pub epsilon: f64,
}

impl CouplingParams {
    pub fn new(tau: f64, epsilon: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::param("tau", format!("must be finite, got {tau}")));
        }
        if !epsilon.is_finite() {
            return Err(Error::param(
                "epsilon",
                format!("must be finite, got {epsilon}"),
            ));
        }
        Ok(CouplingParams { tau, epsilon })
    }

    /// As [`CouplingParams::new`], additionally requiring `eps` in `[floor, pi/2]`.
    pub fn for_estimation(tau: f64, epsilon: f64, epsilon_floor: f64) -> Result<Self> {
        let params = Self::new(tau, epsilon)?;
        if epsilon < epsilon_floor || epsilon > std::f64::consts::FRAC_PI_2 {
            return Err(Error::param(
                "epsilon",
                format!("must lie in [{epsilon_floor}, pi/2] for estimation, got {epsilon}"),
            ));
        }
        Ok(params)
    }

    /// `w0 tau + eps`
    fn phase(&self, omega: f64) -> f64 {
        omega * self.tau + self.epsilon
    }
}

/// Frequency filter imposed by postselection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumForm {
    /// `sin^2(w tau + eps)`; reproduces the closed forms for `T` and `dw`.
    #[default]
    Consistent,
    /// `cos^2(w tau - eps)`, the literal expansion of the bracket
    /// `e^{i(w tau - eps)} + e^{-i(w tau - eps)}`. Its `tau = 0` probability is
    /// `cos^2 eps`, so it cannot match `T -> sin^2 eps`; kept for comparison.
    AsPrinted,
}

impl SpectrumForm {
    /// Filter value at `omega`.
    pub fn transmission(&self, params: &CouplingParams, omega: f64) -> f64 {
        match self {
            SpectrumForm::Consistent => params.phase(omega).sin().powi(2),
            SpectrumForm::AsPrinted => (omega * params.tau - params.epsilon).cos().powi(2),
        }
    }

    /// `(filter(ref + x), filter(ref + x) - filter(ref))`, the difference
    /// evaluated without cancellation.
    fn transmission_split(
        &self,
        params: &CouplingParams,
        reference: f64,
        offset: f64,
    ) -> (f64, f64) {
        let a = offset * params.tau;
        match self {
            SpectrumForm::Consistent => {
                let theta = params.phase(reference);
                let value = (theta + a).sin().powi(2);
                // sin^2(t + a) - sin^2(t) = sin(a) sin(2t + a)
                (value, a.sin() * (2.0 * theta + a).sin())
            }
            SpectrumForm::AsPrinted => {
                let theta = reference * params.tau - params.epsilon;
                let value = (theta + a).cos().powi(2);
                (value, -a.sin() * (2.0 * theta + a).sin())
            }
        }
    }
}

/// `exp(-d^2 tau^2)`: interference contrast left after a delay `tau`.
pub fn decoherence_envelope(profile: &SpectralProfile, tau: f64) -> f64 {
    let x = profile.delta() * tau;
    (-x * x).exp()
}

/// Postselection probability in closed form.
pub fn closed_form_probability(profile: &SpectralProfile, params: &CouplingParams) -> f64 {
    let x = profile.delta() * params.tau;
    let envelope = (-x * x).exp();
    // 1 - e cos 2t = (1 - e) + 2 e sin^2 t, each term free of cancellation
    let incoherent = -0.5 * (-x * x).exp_m1();
    incoherent + envelope * params.phase(profile.omega0()).sin().powi(2)
}

/// Centroid shift of the post-selected spectrum in closed form (rad/s).
pub fn closed_form_shift(profile: &SpectralProfile, params: &CouplingParams) -> Result<f64> {
    let probability = closed_form_probability(profile, params);
    if !(probability > PROBABILITY_FLOOR) {
        return Err(Error::ZeroPostselection {
            probability,
            floor: PROBABILITY_FLOOR,
        });
    }
    let delta = profile.delta();
    let envelope = decoherence_envelope(profile, params.tau);
    let twice_phase = 2.0 * params.phase(profile.omega0());
    Ok(params.tau * delta * delta / (2.0 * probability) * envelope * twice_phase.sin())
}

/// Postselection probability by summing the filtered grid.
pub fn numeric_probability(params: &CouplingParams, grid: &SpectralGrid) -> f64 {
    numeric_probability_with_form(params, grid, SpectrumForm::Consistent)
}

pub fn numeric_probability_with_form(
    params: &CouplingParams,
    grid: &SpectralGrid,
    form: SpectrumForm,
) -> f64 {
    let reference = grid.reference();
    grid.offsets()
        .iter()
        .zip(grid.weights())
        .map(|(&x, &w)| w * form.transmission_split(params, reference, x).0)
        .collect::<CompensatedSum>()
        .total()
}

/// Post-selected spectrum on the same support, renormalized to unit mass.
pub fn postselected_spectrum(params: &CouplingParams, grid: &SpectralGrid) -> Result<SpectralGrid> {
    postselected_spectrum_with_form(params, grid, SpectrumForm::Consistent)
}

pub fn postselected_spectrum_with_form(
    params: &CouplingParams,
    grid: &SpectralGrid,
    form: SpectrumForm,
) -> Result<SpectralGrid> {
    let reference = grid.reference();
    let filtered: Vec<f64> = grid
        .offsets()
        .iter()
        .zip(grid.weights())
        .map(|(&x, &w)| w * form.transmission_split(params, reference, x).0)
        .collect();
    let probability = filtered.iter().copied().collect::<CompensatedSum>().total();
    if !(probability > PROBABILITY_FLOOR) {
        return Err(Error::ZeroPostselection {
            probability,
            floor: PROBABILITY_FLOOR,
        });
    }
    let weights = filtered.into_iter().map(|w| w / probability).collect();
    Ok(grid.with_weights(weights))
}

/// Centroid shift measured on the grid: centroid of the post-selected
/// spectrum minus centroid of the unfiltered one.
///
/// Evaluated as `sum w (x - xbar)(filter - mean filter) / sum w filter`, which
/// is exactly zero when the filter is constant.
pub fn numeric_shift(params: &CouplingParams, grid: &SpectralGrid) -> Result<f64> {
    numeric_shift_with_form(params, grid, SpectrumForm::Consistent)
}

pub fn numeric_shift_with_form(
    params: &CouplingParams,
    grid: &SpectralGrid,
    form: SpectrumForm,
) -> Result<f64> {
    let offsets = grid.offsets();
    let weights = grid.weights();
    let (total, mean_offset, _) = centered_moments(offsets, weights)?;
    let reference = grid.reference();
    let split: Vec<(f64, f64)> = offsets
        .iter()
        .map(|&x| form.transmission_split(params, reference, x))
        .collect();

    let probability = split
        .iter()
        .zip(weights)
        .map(|(s, w)| s.0 * w)
        .collect::<CompensatedSum>()
        .total();
    if !(probability > PROBABILITY_FLOOR) {
        return Err(Error::ZeroPostselection {
            probability,
            floor: PROBABILITY_FLOOR,
        });
    }
    let mean_deviation = split
        .iter()
        .zip(weights)
        .map(|(s, w)| s.1 * w)
        .collect::<CompensatedSum>()
        .total()
        / total;
    let covariance = offsets
        .iter()
        .zip(weights)
        .zip(&split)
        .map(|((x, w), s)| w * (x - mean_offset) * (s.1 - mean_deviation))
        .collect::<CompensatedSum>()
        .total();
    Ok(covariance / probability)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakLimit {
    /// `sin^2 eps`
    pub probability: f64,
    /// `tau d^2 cot eps`, rad/s
    pub shift: f64,
}

/// First-order (small `tau`) limits of the probability and the shift.
pub fn weak_limit(profile: &SpectralProfile, params: &CouplingParams) -> Result<WeakLimit> {
    if !(params.epsilon > 0.0) {
        return Err(Error::param(
            "epsilon",
            format!("weak limit needs eps > 0, got {}", params.epsilon),
        ));
    }
    let delta = profile.delta();
    Ok(WeakLimit {
        probability: params.epsilon.sin().powi(2),
        shift: params.tau * delta * delta / params.epsilon.tan(),
    })
}

/// Gain `G = dw / (tau d^2)`: the shift in units of the bare bandwidth
/// response. Tends to `cot eps = |Im A_w|` in the weak limit.
pub fn amplification_factor(profile: &SpectralProfile, params: &CouplingParams) -> Result<f64> {
    if params.tau == 0.0 {
        return Err(Error::UndefinedGain);
    }
    let delta = profile.delta();
    Ok(closed_form_shift(profile, params)? / (params.tau * delta * delta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkingRange {
    /// Largest `|tau|` keeping the envelope above the threshold (s).
    pub tau_max_weak: f64,
    /// `eps / (10 w0)`: beyond it the shift is no longer linear in `tau` (s).
    pub linearity_bound: f64,
    pub envelope_threshold: f64,
    pub description: String,
}

impl WorkingRange {
    /// Tighter of the two bounds.
    pub fn tau_max(&self) -> f64 {
        self.tau_max_weak.min(self.linearity_bound)
    }
}

/// Delays for which the weak-measurement description applies.
pub fn working_range(
    profile: &SpectralProfile,
    epsilon: f64,
    envelope_threshold: f64,
) -> Result<WorkingRange> {
    if !(envelope_threshold > 0.0 && envelope_threshold < 1.0) {
        return Err(Error::param(
            "envelope_threshold",
            format!("must lie in (0, 1), got {envelope_threshold}"),
        ));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::param(
            "epsilon",
            format!("must be positive, got {epsilon}"),
        ));
    }
    let tau_max_weak = (-envelope_threshold.ln()).sqrt() / profile.delta();
    let linearity_bound = epsilon / (10.0 * profile.omega0());
    let description = format!(
        "envelope exp(-d^2 tau^2) >= {envelope_threshold} for |tau| <= {tau_max_weak:.6e} s; \
         shift linear in tau (|w0 tau| <= eps/10) for |tau| <= {linearity_bound:.6e} s"
    );
    Ok(WorkingRange {
        tau_max_weak,
        linearity_bound,
        envelope_threshold,
        description,
    })
}

/// Weak-limit shift of the pulsed time-domain scheme, `2 tau / (sigma^2 eps)`.
pub fn bs_scheme_shift(tau: f64, sigma: f64, epsilon: f64) -> f64 {
    2.0 * tau / (sigma * sigma * epsilon)
}

/// Ratio of the weak-limit shift here to the pulsed-scheme one at `sigma = 1/d`:
/// `eps cot(eps) / 2`, tending to 1/2 for small `eps`.
pub fn bs_convention_ratio(epsilon: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::param(
            "epsilon",
            format!("must be positive, got {epsilon}"),
        ));
    }
    Ok(0.5 * epsilon / epsilon.tan())
}

/// Regime of a single `(profile, tau, eps)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Linearity {
    Linear,
    Nonlinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coherence {
    Coherent,
    Decohered,
}

/// Everything the closed forms say about one measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementResult {
    pub probability: f64,
    pub centroid: f64,
    pub shift: f64,
    pub weak_limit_shift: f64,
    pub weak_limit_probability: f64,
    /// `None` at `tau = 0`, where the gain is undefined.
    pub amplification_factor: Option<f64>,
    pub envelope: f64,
    pub linearity: Linearity,
    pub coherence: Coherence,
}

pub fn measure(profile: &SpectralProfile, params: &CouplingParams) -> Result<MeasurementResult> {
    let probability = closed_form_probability(profile, params);
    let shift = closed_form_shift(profile, params)?;
    let limit = weak_limit(profile, params)?;
    let amplification_factor = match amplification_factor(profile, params) {
        Ok(g) => Some(g),
        Err(Error::UndefinedGain) => None,
        Err(e) => return Err(e),
    };
    let envelope = decoherence_envelope(profile, params.tau);
    let linearity = if (profile.omega0() * params.tau).abs() <= params.epsilon.abs() / 10.0 {
        Linearity::Linear
    } else {
        Linearity::Nonlinear
    };
    let coherence = if envelope >= DEFAULT_ENVELOPE_THRESHOLD {
        Coherence::Coherent
    } else {
        Coherence::Decohered
    };
    Ok(MeasurementResult {
        probability,
        centroid: profile.omega0() + shift,
        shift,
        weak_limit_shift: limit.shift,
        weak_limit_probability: limit.probability,
        amplification_factor,
        envelope,
        linearity,
        coherence,
    })
}
