//! Simulated spectrometer, centroid estimation and delay inversion.
//!
//! The detector sees the post-selected spectrum only: the photon budget `N`
//! is multiplied by the postselection probability `T` before counting, so a
//! small `eps` buys gain at the price of photons. Processing order follows the
//! instrument: Gaussian response, alignment offset, pixel integration, then
//! Poisson counting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplification::{
    closed_form_shift, numeric_probability, postselected_spectrum, CouplingParams,
    DEFAULT_EPSILON_FLOOR,
};
use crate::error::{Error, Result};
use crate::spectral::{
    sample_grid, SpectralGrid, SpectralProfile, DEFAULT_GRID_POINTS, DEFAULT_SPAN_SIGMAS,
};
use crate::sum::CompensatedSum;

pub const DEFAULT_PIXELS: usize = 2048;
pub const MIN_PIXELS: usize = 8;
/// Default instrument response width as a fraction of `delta`.
pub const DEFAULT_RESOLUTION_FRACTION: f64 = 1.0 / 50.0;
pub const DEFAULT_PHOTON_BUDGET: f64 = 1e8;

const RANGE_WARNING_FRACTION: f64 = 0.01;
const RANGE_ERROR_FRACTION: f64 = 0.5;
/// Instrument response is truncated at this many standard deviations.
const RESPONSE_CUTOFF_SIGMAS: f64 = 10.0;
/// Fraction of failed trials beyond which a study is rejected.
const MAX_FAILED_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Photon counting: each pixel is a Poisson draw.
    #[default]
    Poisson,
    /// Infinite-photon limit: pixels hold their expected counts.
    Expected,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "poisson" => Ok(NoiseMode::Poisson),
            "expected" | "noise-free" => Ok(NoiseMode::Expected),
            other => Err(Error::param(
                "noise",
                format!("expected poisson or expected, got `{other}`"),
            )),
        }
    }
}

/// Spectrometer with `n_pixels` equal pixels covering `center +/- half_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    n_pixels: usize,
    center: f64,
    half_width: f64,
    pub resolution_sigma: f64,
    pub alignment_offset: f64,
    pub photon_budget: f64,
    pub noise: NoiseMode,
}

impl DetectorModel {
    pub fn new(
        n_pixels: usize,
        range_low: f64,
        range_high: f64,
        resolution_sigma: f64,
        alignment_offset: f64,
        photon_budget: f64,
    ) -> Result<Self> {
        if !(range_low.is_finite() && range_high.is_finite() && range_low < range_high) {
            return Err(Error::param(
                "range",
                format!("need range_low < range_high, got [{range_low}, {range_high}]"),
            ));
        }
        Self::centered(
            n_pixels,
            0.5 * (range_low + range_high),
            0.5 * (range_high - range_low),
            resolution_sigma,
            alignment_offset,
            photon_budget,
        )
    }

    pub fn centered(
        n_pixels: usize,
        center: f64,
        half_width: f64,
        resolution_sigma: f64,
        alignment_offset: f64,
        photon_budget: f64,
    ) -> Result<Self> {
        if n_pixels < MIN_PIXELS {
            return Err(Error::param(
                "n_pixels",
                format!("need at least {MIN_PIXELS}, got {n_pixels}"),
            ));
        }
        if !(center.is_finite() && half_width.is_finite() && half_width > 0.0) {
            return Err(Error::param(
                "range",
                "center and half width must be finite, width positive",
            ));
        }
        if !(resolution_sigma.is_finite() && resolution_sigma >= 0.0) {
            return Err(Error::param(
                "resolution_sigma",
                format!("must be >= 0, got {resolution_sigma}"),
            ));
        }
        if !alignment_offset.is_finite() {
            return Err(Error::param("alignment_offset", "must be finite"));
        }
        if !(photon_budget.is_finite() && photon_budget > 0.0) {
            return Err(Error::param(
                "photon_budget",
                format!("must be positive, got {photon_budget}"),
            ));
        }
        Ok(DetectorModel {
            n_pixels,
            center,
            half_width,
            resolution_sigma,
            alignment_offset,
            photon_budget,
            noise: NoiseMode::Poisson,
        })
    }

    /// Default instrument for a source: 2048 pixels over `w0 +/- 8 d`,
    /// response width `d/50`, no misalignment.
    pub fn for_profile(profile: &SpectralProfile) -> Self {
        DetectorModel::centered(
            DEFAULT_PIXELS,
            profile.omega0(),
            DEFAULT_SPAN_SIGMAS * profile.delta(),
            profile.delta() * DEFAULT_RESOLUTION_FRACTION,
            0.0,
            DEFAULT_PHOTON_BUDGET,
        )
        .expect("default detector is valid")
    }

    pub fn with_noise(mut self, noise: NoiseMode) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_photon_budget(mut self, photon_budget: f64) -> Self {
        self.photon_budget = photon_budget;
        self
    }

    pub fn with_alignment_offset(mut self, offset: f64) -> Self {
        self.alignment_offset = offset;
        self
    }

    pub fn with_resolution(mut self, resolution_sigma: f64) -> Self {
        self.resolution_sigma = resolution_sigma;
        self
    }

    pub fn n_pixels(&self) -> usize {
        self.n_pixels
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn range_low(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn range_high(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn pixel_width(&self) -> f64 {
        2.0 * self.half_width / self.n_pixels as f64
    }

    /// Pixel centers relative to [`DetectorModel::center`].
    pub fn pixel_offsets(&self) -> Vec<f64> {
        let w = self.pixel_width();
        let mid = 0.5 * self.n_pixels as f64;
        (0..self.n_pixels)
            .map(|k| (k as f64 + 0.5 - mid) * w)
            .collect()
    }

    /// Lower edge of pixel `k` relative to the center; `k = n_pixels` gives the top edge.
    fn edge(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * self.n_pixels as f64) * self.pixel_width()
    }
}

/// Expected photon counts per pixel before any noise is drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedSpectrum {
    pub center: f64,
    pub pixel_offsets: Vec<f64>,
    pub means: Vec<f64>,
    /// Fraction of the post-selected light that misses the detector.
    pub fraction_outside: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisySpectrum {
    pub center: f64,
    pub pixel_offsets: Vec<f64>,
    /// Photon counts; whole numbers under [`NoiseMode::Poisson`], expected
    /// values under [`NoiseMode::Expected`].
    pub counts: Vec<f64>,
    pub seed: u64,
    pub fraction_outside: f64,
    pub warnings: Vec<String>,
}

impl NoisySpectrum {
    pub fn pixel_centers(&self) -> Vec<f64> {
        self.pixel_offsets.iter().map(|x| self.center + x).collect()
    }

    pub fn total_counts(&self) -> f64 {
        self.counts
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .total()
    }

    /// Same counts with every pixel center moved by `shift`.
    pub fn translated(&self, shift: f64) -> NoisySpectrum {
        NoisySpectrum {
            center: self.center + shift,
            ..self.clone()
        }
    }
}

/// `P(a < Z < b)` for a standard normal `Z`, accurate in both tails.
fn normal_mass(a: f64, b: f64) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if a >= 0.0 {
        0.5 * (libm::erfc(a * s) - libm::erfc(b * s))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b * s) - libm::erfc(-a * s))
    } else {
        1.0 - 0.5 * (libm::erfc(-a * s) + libm::erfc(b * s))
    }
}

/// Pixel means `N T p_k` for a normalized spectrum.
pub fn expected_counts(
    spectrum: &SpectralGrid,
    probability: f64,
    model: &DetectorModel,
) -> Result<ExpectedSpectrum> {
    if !(probability.is_finite() && (0.0..=1.0).contains(&probability)) {
        return Err(Error::param(
            "probability",
            format!("must lie in [0, 1], got {probability}"),
        ));
    }
    let n = model.n_pixels;
    let w = model.pixel_width();
    let low_edge = model.edge(0);
    let high_edge = model.edge(n);
    let frame_shift = (spectrum.reference() - model.center) + model.alignment_offset;
    let r = model.resolution_sigma;

    let mut mass = vec![CompensatedSum::new(); n];
    let mut outside = CompensatedSum::new();
    for (&x, &p) in spectrum.offsets().iter().zip(spectrum.weights()) {
        if p == 0.0 {
            continue;
        }
        let y = x + frame_shift;
        if r == 0.0 {
            if y < low_edge || y >= high_edge {
                outside.add(p);
            } else {
                let k = (((y - low_edge) / w).floor() as usize).min(n - 1);
                mass[k].add(p);
            }
            continue;
        }
        outside.add(p * normal_mass(f64::NEG_INFINITY, (low_edge - y) / r));
        outside.add(p * normal_mass((high_edge - y) / r, f64::INFINITY));
        let reach = RESPONSE_CUTOFF_SIGMAS * r;
        let first = ((y - reach - low_edge) / w).floor().max(0.0);
        let last = ((y + reach - low_edge) / w).ceil().min(n as f64);
        if first >= last {
            continue;
        }
        let first = first as usize;
        for (k, bin) in mass[first..last as usize].iter_mut().enumerate() {
            let a = (model.edge(first + k) - y) / r;
            let b = (model.edge(first + k + 1) - y) / r;
            bin.add(p * normal_mass(a, b));
        }
    }

    let total = spectrum.total_weight();
    let fraction_outside = if total > 0.0 {
        (outside.total() / total).clamp(0.0, 1.0)
    } else {
        0.0
    };
    if fraction_outside > RANGE_ERROR_FRACTION {
        return Err(Error::DetectorMisconfigured { fraction_outside });
    }
    let mut warnings = Vec::new();
    if fraction_outside > RANGE_WARNING_FRACTION {
        warnings.push(format!(
            "range clipping: {:.2}% of the spectrum falls outside the detector",
            100.0 * fraction_outside
        ));
    }
    let scale = model.photon_budget * probability;
    Ok(ExpectedSpectrum {
        center: model.center,
        pixel_offsets: model.pixel_offsets(),
        means: mass.iter().map(|m| (m.total() * scale).max(0.0)).collect(),
        fraction_outside,
        warnings,
    })
}

/// Draws pixel counts from the expected spectrum.
pub fn sample_counts(expected: &ExpectedSpectrum, noise: NoiseMode, seed: u64) -> NoisySpectrum {
    let counts = match noise {
        NoiseMode::Expected => expected.means.clone(),
        NoiseMode::Poisson => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            expected
                .means
                .iter()
                .map(|&lambda| {
                    if lambda > 0.0 {
                        Poisson::new(lambda)
                            .expect("positive finite mean")
                            .sample(&mut rng)
                    } else {
                        0.0
                    }
                })
                .collect()
        }
    };
    NoisySpectrum {
        center: expected.center,
        pixel_offsets: expected.pixel_offsets.clone(),
        counts,
        seed,
        fraction_outside: expected.fraction_outside,
        warnings: expected.warnings.clone(),
    }
}

/// Runs the spectrometer on a normalized post-selected spectrum.
pub fn detect(
    spectrum: &SpectralGrid,
    probability: f64,
    model: &DetectorModel,
    seed: u64,
) -> Result<NoisySpectrum> {
    let expected = expected_counts(spectrum, probability, model)?;
    Ok(sample_counts(&expected, model.noise, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentroidEstimate {
    pub centroid: f64,
    pub stderr: f64,
}

/// Count-weighted mean offset from `origin` and its standard error.
fn centroid_about(noisy: &NoisySpectrum, origin: f64) -> Result<(f64, f64)> {
    let total = noisy.total_counts();
    if !(total > 0.0) {
        return Err(Error::NoSignal);
    }
    let base = noisy.center - origin;
    let first: CompensatedSum = noisy
        .pixel_offsets
        .iter()
        .zip(&noisy.counts)
        .map(|(x, c)| x * c)
        .collect();
    let mean_offset = first.total() / total;
    let second: CompensatedSum = noisy
        .pixel_offsets
        .iter()
        .zip(&noisy.counts)
        .map(|(x, c)| (x - mean_offset).powi(2) * c)
        .collect();
    let spread = (second.total() / total).max(0.0).sqrt();
    Ok((base + mean_offset, spread / total.sqrt()))
}

/// Sample version of the spectral centroid.
pub fn estimate_centroid(noisy: &NoisySpectrum) -> Result<CentroidEstimate> {
    let (offset, stderr) = centroid_about(noisy, noisy.center)?;
    Ok(CentroidEstimate {
        centroid: noisy.center + offset,
        stderr,
    })
}

/// Measured centroid shift relative to the known source center `omega0`.
pub fn estimate_shift(noisy: &NoisySpectrum, omega0: f64) -> Result<CentroidEstimate> {
    let (shift, stderr) = centroid_about(noisy, omega0)?;
    Ok(CentroidEstimate {
        centroid: shift,
        stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InversionMethod {
    /// `tau = dw tan(eps) / d^2`
    WeakLimit,
    /// Root of the exact shift on its monotone branch through `tau = 0`.
    #[default]
    ExactInvert,
}

impl InversionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            InversionMethod::WeakLimit => "weak-limit",
            InversionMethod::ExactInvert => "exact-invert",
        }
    }
}

impl std::str::FromStr for InversionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "weak-limit" => Ok(InversionMethod::WeakLimit),
            "exact-invert" => Ok(InversionMethod::ExactInvert),
            other => Err(Error::param(
                "method",
                format!("expected weak-limit or exact-invert, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionOptions {
    /// Half-width of the delay bracket (s); `None` means `10 eps / w0`,
    /// a hundred times the linearity bound.
    pub bracket: Option<f64>,
    pub max_iterations: usize,
    /// Samples used to locate the monotone branch.
    pub scan_points: usize,
    pub epsilon_floor: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            bracket: None,
            max_iterations: 200,
            scan_points: 513,
            epsilon_floor: DEFAULT_EPSILON_FLOOR,
        }
    }
}

/// Converts a measured centroid shift into a delay estimate.
pub fn invert_shift(
    shift: f64,
    profile: &SpectralProfile,
    epsilon: f64,
    method: InversionMethod,
) -> Result<f64> {
    invert_shift_with(
        shift,
        profile,
        epsilon,
        method,
        &InversionOptions::default(),
    )
}

pub fn invert_shift_with(
    shift: f64,
    profile: &SpectralProfile,
    epsilon: f64,
    method: InversionMethod,
    options: &InversionOptions,
) -> Result<f64> {
    if !shift.is_finite() {
        return Err(Error::param("shift", "must be finite"));
    }
    if !(epsilon > options.epsilon_floor && epsilon <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::param(
            "epsilon",
            format!(
                "must lie in ({}, pi/2], got {epsilon}",
                options.epsilon_floor
            ),
        ));
    }
    let delta_sq = profile.delta() * profile.delta();
    match method {
        InversionMethod::WeakLimit => Ok(shift * epsilon.tan() / delta_sq),
        InversionMethod::ExactInvert => exact_invert(shift, profile, epsilon, options),
    }
}

fn exact_invert(
    target: f64,
    profile: &SpectralProfile,
    epsilon: f64,
    options: &InversionOptions,
) -> Result<f64> {
    let bracket = options.bracket.unwrap_or(10.0 * epsilon / profile.omega0());
    if !(bracket.is_finite() && bracket > 0.0) {
        return Err(Error::param(
            "bracket",
            format!("must be positive, got {bracket}"),
        ));
    }
    let forward = |tau: f64| -> f64 {
        CouplingParams::new(tau, epsilon)
            .and_then(|p| closed_form_shift(profile, &p))
            .unwrap_or(f64::NAN)
    };
    if target == 0.0 {
        return Ok(0.0);
    }

    // Scan [-bracket, bracket]; the middle sample sits exactly at tau = 0.
    let half = options.scan_points.max(9) / 2;
    let taus: Vec<f64> = (0..=2 * half)
        .map(|k| bracket * (k as f64 - half as f64) / half as f64)
        .collect();
    let values: Vec<f64> = taus.iter().map(|&t| forward(t)).collect();

    let mut hi = half;
    while hi + 1 < taus.len() && values[hi + 1] > values[hi] {
        hi += 1;
    }
    let mut lo = half;
    while lo > 0 && values[lo - 1] < values[lo] {
        lo -= 1;
    }

    // The branch may continue past the last increasing sample up to a turning
    // point between samples; locate it before giving up on the target.
    let (mut branch_lo, mut branch_hi) = (taus[lo], taus[hi]);
    if target > values[hi] && hi + 1 < taus.len() {
        branch_hi = turning_point(&forward, taus[hi - 1], taus[hi + 1], true);
    }
    if target < values[lo] && lo > 0 {
        branch_lo = turning_point(&forward, taus[lo - 1], taus[lo + 1], false);
    }
    let (f_lo, f_hi) = (forward(branch_lo), forward(branch_hi));

    if target >= f_lo && target <= f_hi {
        return Ok(bisect(
            &forward,
            target,
            branch_lo,
            branch_hi,
            options.max_iterations,
        ));
    }

    let crosses_elsewhere = taus.windows(2).zip(values.windows(2)).any(|(t, v)| {
        let outside = t[1] <= branch_lo || t[0] >= branch_hi;
        outside && (v[0] - target).signum() != (v[1] - target).signum()
    });
    if crosses_elsewhere {
        Err(Error::AmbiguousShift {
            shift: target,
            bracket,
        })
    } else {
        Err(Error::OutOfRangeShift {
            shift: target,
            low: -bracket,
            high: bracket,
        })
    }
}

/// Golden-section search for the extremum of `f` on `[a, b]`.
fn turning_point(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, maximum: bool) -> f64 {
    let sign = if maximum { 1.0 } else { -1.0 };
    let g = |t: f64| sign * f(t);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    if gc > gd {
        c
    } else {
        d
    }
}

/// Bisection on an increasing `f` with `f(lo) <= target <= f(hi)`.
fn bisect(
    f: &dyn Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    max_iterations: usize,
) -> f64 {
    for _ in 0..max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = f(mid);
        if value == target {
            return mid;
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (f_lo, f_hi) = (f(lo), f(hi));
    if (target - f_lo).abs() <= (f_hi - target).abs() {
        lo
    } else {
        hi
    }
}

/// Grid and inversion settings for [`monte_carlo_study`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub method: InversionMethod,
    pub grid_span: f64,
    pub grid_points: usize,
    pub inversion: InversionOptions,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            method: InversionMethod::ExactInvert,
            grid_span: DEFAULT_SPAN_SIGMAS,
            grid_points: DEFAULT_GRID_POINTS,
            inversion: InversionOptions::default(),
        }
    }
}

/// Outcome of a repeated detect -> estimate -> invert experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    /// Mean delay estimate over successful trials (s).
    pub tau_hat: f64,
    pub tau_true: f64,
    pub method: InversionMethod,
    /// Mean measured centroid (rad/s).
    pub centroid_hat: f64,
    /// Mean per-trial standard error of the centroid (rad/s).
    pub centroid_stderr: f64,
    pub n_trials: usize,
    pub n_failed: usize,
    /// `tau_hat - tau_true` (s).
    pub bias: f64,
    /// Sample standard deviation of the per-trial delay estimates (s).
    pub std: f64,
    pub epsilon: f64,
    pub postselection_probability: f64,
    pub photon_budget: f64,
    pub expected_detected_photons: f64,
    pub noise: NoiseMode,
    pub base_seed: u64,
    pub warnings: Vec<String>,
}

struct Trial {
    tau_hat: f64,
    shift: f64,
    stderr: f64,
}

/// Repeats the measurement `n_trials` times with seeds `base_seed + i`.
///
/// Trials run in parallel and are aggregated in index order, so the report
/// does not depend on the thread count.
pub fn monte_carlo_study(
    profile: &SpectralProfile,
    params: &CouplingParams,
    model: &DetectorModel,
    n_trials: usize,
    base_seed: u64,
    options: &StudyOptions,
) -> Result<EstimationReport> {
    if n_trials < 2 {
        return Err(Error::param(
            "n_trials",
            format!("need at least 2, got {n_trials}"),
        ));
    }
    let grid = sample_grid(profile, options.grid_span, options.grid_points)?;
    let post = postselected_spectrum(params, &grid)?;
    let probability = numeric_probability(params, &grid);
    let expected = expected_counts(&post, probability, model)?;
    let expected_detected_photons = expected
        .means
        .iter()
        .copied()
        .collect::<CompensatedSum>()
        .total();

    let outcomes: Vec<Result<Trial>> = (0..n_trials)
        .into_par_iter()
        .map(|i| {
            let noisy = sample_counts(&expected, model.noise, base_seed.wrapping_add(i as u64));
            let measured = estimate_shift(&noisy, profile.omega0())?;
            let tau_hat = invert_shift_with(
                measured.centroid,
                profile,
                params.epsilon,
                options.method,
                &options.inversion,
            )?;
            Ok(Trial {
                tau_hat,
                shift: measured.centroid,
                stderr: measured.stderr,
            })
        })
        .collect();

    let mut trials = Vec::with_capacity(n_trials);
    let mut failed = 0usize;
    let mut last_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(t) => trials.push(t),
            Err(e) => {
                failed += 1;
                last_error = Some(e);
            }
        }
    }
    if failed as f64 > MAX_FAILED_FRACTION * n_trials as f64 || trials.len() < 2 {
        return Err(Error::StudyDegenerate {
            failed,
            total: n_trials,
            last: last_error.map(|e| e.to_string()).unwrap_or_default(),
        });
    }

    let count = trials.len() as f64;
    let mean = |f: &dyn Fn(&Trial) -> f64| -> f64 {
        trials.iter().map(f).collect::<CompensatedSum>().total() / count
    };
    let tau_hat = mean(&|t| t.tau_hat);
    let shift_hat = mean(&|t| t.shift);
    let centroid_stderr = mean(&|t| t.stderr);
    let variance = trials
        .iter()
        .map(|t| (t.tau_hat - tau_hat).powi(2))
        .collect::<CompensatedSum>()
        .total()
        / (count - 1.0);

    let mut warnings = expected.warnings.clone();
    if failed > 0 {
        warnings.push(format!(
            "{failed} of {n_trials} trials failed and were excluded"
        ));
    }
    Ok(EstimationReport {
        tau_hat,
        tau_true: params.tau,
        method: options.method,
        centroid_hat: profile.omega0() + shift_hat,
        centroid_stderr,
        n_trials,
        n_failed: failed,
        bias: tau_hat - params.tau,
        std: variance.sqrt(),
        epsilon: params.epsilon,
        postselection_probability: probability,
        photon_budget: model.photon_budget,
        expected_detected_photons,
        noise: model.noise,
        base_seed,
        warnings,
    })
}
