// Building the probe from a quoted wavelength and bandwidth.

use weakphase::spectral::{
    default_grid, from_wavelength, grid_moments, time_domain_dual, WidthConvention,
};
use weakphase::units::{wavelength, NANOMETER};

fn run_example() -> weakphase::Result<()> {
    for convention in [
        WidthConvention::AmplitudeSpread,
        WidthConvention::IntensityFwhm,
    ] {
        let profile = from_wavelength(600.0 * NANOMETER, 100.0 * NANOMETER, convention)?;
        let moments = grid_moments(&default_grid(&profile))?;
        let pulse = time_domain_dual(&profile);
        println!(
            "{convention:<16} w0 = {:.6e} rad/s ({:.1} nm)  d = {:.6e} rad/s  \
             grid variance / (d^2/2) = {:.12}  pulse sigma = {:.3} fs",
            profile.omega0(),
            wavelength(profile.omega0()) / NANOMETER,
            profile.delta(),
            moments.variance / profile.power_variance(),
            pulse.sigma * 1e15
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("spectral probe example");
}
