// Spectrometer readout, centroid, and inversion back to a delay.

use weakphase::amplification::{numeric_probability, postselected_spectrum, CouplingParams};
use weakphase::detection::{
    detect, estimate_shift, invert_shift, monte_carlo_study, DetectorModel, InversionMethod,
    NoiseMode, StudyOptions,
};
use weakphase::spectral::{default_grid, from_wavelength, WidthConvention};
use weakphase::units::{ATTOSECOND, NANOMETER};

fn run_example() -> weakphase::Result<()> {
    let profile = from_wavelength(
        600.0 * NANOMETER,
        100.0 * NANOMETER,
        WidthConvention::AmplitudeSpread,
    )?;
    let params = CouplingParams::new(10.0 * ATTOSECOND, 0.01)?;
    let grid = default_grid(&profile);
    let spectrum = postselected_spectrum(&params, &grid)?;
    let probability = numeric_probability(&params, &grid);

    // One noise-free reading, inverted both ways.
    let ideal = DetectorModel::for_profile(&profile).with_noise(NoiseMode::Expected);
    let reading = detect(&spectrum, probability, &ideal, 0)?;
    let shift = estimate_shift(&reading, profile.omega0())?.centroid;
    for method in [InversionMethod::WeakLimit, InversionMethod::ExactInvert] {
        let tau = invert_shift(shift, &profile, params.epsilon, method)?;
        println!(
            "{:<13} tau = {:.12e} s (true {:.1e})",
            method.as_str(),
            tau,
            params.tau
        );
    }

    // Shot-noise precision for two photon budgets.
    for budget in [1e8, 4e8] {
        let model = DetectorModel::for_profile(&profile).with_photon_budget(budget);
        let r = monte_carlo_study(&profile, &params, &model, 100, 7, &StudyOptions::default())?;
        println!(
            "N = {budget:.0e}: tau_hat = {:.4e} s, bias = {:+.2e} s, std = {:.3e} s, {:.0} detected photons",
            r.tau_hat, r.bias, r.std, r.expected_detected_photons
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("delay estimation example");
}
