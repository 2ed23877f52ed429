//! SI constants and the human units accepted at the command-line boundary.

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const NANOMETER: f64 = 1e-9;
pub const FEMTOSECOND: f64 = 1e-15;
pub const ATTOSECOND: f64 = 1e-18;

/// Angular frequency (rad/s) of light with vacuum wavelength `lambda` (m).
pub fn angular_frequency(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda
}

/// Vacuum wavelength (m) of light with angular frequency `omega` (rad/s).
pub fn wavelength(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let omega = angular_frequency(600.0 * NANOMETER);
        assert!((omega - 3.139_419_278_848e15).abs() < 1e3);
        assert!((wavelength(omega) / (600.0 * NANOMETER) - 1.0).abs() < 1e-15);
    }
}
