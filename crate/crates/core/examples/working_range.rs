// Where the weak-measurement description holds, and what happens outside it.

use weakphase::amplification::{
    measure, working_range, CouplingParams, DEFAULT_ENVELOPE_THRESHOLD,
};
use weakphase::spectral::from_wavelength;
use weakphase::spectral::WidthConvention;
use weakphase::units::NANOMETER;

fn run_example() -> weakphase::Result<()> {
    let profile = from_wavelength(
        600.0 * NANOMETER,
        100.0 * NANOMETER,
        WidthConvention::AmplitudeSpread,
    )?;
    let eps = 0.01;
    let range = working_range(&profile, eps, DEFAULT_ENVELOPE_THRESHOLD)?;
    println!("{}", range.description);
    for tau in [0.0, 1e-20, 1e-19, 1e-18, 1e-17, 1e-16, 1e-15, 1e-14] {
        let m = measure(&profile, &CouplingParams::new(tau, eps)?)?;
        println!(
            "tau = {tau:7.0e} s  T = {:.6e}  shift = {:.6e}  weak limit = {:.6e}  G = {}  {:?}, {:?}",
            m.probability,
            m.shift,
            m.weak_limit_shift,
            m.amplification_factor.map_or("undefined".into(), |g| format!("{g:.4}")),
            m.linearity,
            m.coherence
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("working range example");
}
