use proptest::prelude::*;
use weakphase::spectral::{
    from_wavelength, gaussian_profile, grid_moments, sample_grid, WidthConvention,
};
use weakphase::units::NANOMETER;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grids_are_normalized_with_the_right_moments(ratio in 6.0f64..60.0, delta in 1e12f64..1e15) {
        let profile = gaussian_profile(ratio * delta, delta).unwrap();
        let grid = sample_grid(&profile, 8.0, 1 << 14).unwrap();
        prop_assert!((grid.total_weight() - 1.0).abs() < 1e-9);
        let m = grid_moments(&grid).unwrap();
        prop_assert!(rel(m.mean, profile.omega0()) < 1e-6);
        prop_assert!(rel(m.variance, 0.5 * delta * delta) < 1e-6);
    }

    #[test]
    fn wider_bands_give_wider_spectra(
        center in 300.0f64..1500.0,
        w1 in 1.0f64..100.0,
        grow in 1.0001f64..2.0,
    ) {
        for convention in [WidthConvention::AmplitudeSpread, WidthConvention::IntensityFwhm] {
            let narrow = from_wavelength(center * NANOMETER, w1 * NANOMETER, convention).unwrap();
            let wide = from_wavelength(center * NANOMETER, w1 * grow * NANOMETER, convention).unwrap();
            prop_assert!(wide.delta() > narrow.delta());
        }
    }
}

#[test]
fn refinement_has_converged_at_the_default_size() {
    for ratio in [6.0, 10.0, 30.0] {
        let profile = gaussian_profile(ratio * 5e14, 5e14).unwrap();
        let coarse = sample_grid(&profile, 8.0, 1 << 14).unwrap();
        let fine = sample_grid(&profile, 8.0, 1 << 15).unwrap();
        assert!(rel(coarse.total_weight(), fine.total_weight()) < 1e-10);
        let (a, b) = (grid_moments(&coarse).unwrap(), grid_moments(&fine).unwrap());
        assert!(rel(a.mean, b.mean) < 1e-10);
        assert!(rel(a.variance, b.variance) < 1e-10, "ratio {ratio}");
    }
}
