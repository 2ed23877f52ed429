// Driving a single-point report from key-value configuration text.

use weakphase::harness::{commands::to_json, simulate, RunConfig};

const CONFIG: &str = "\
# 800 nm source quoted by its intensity FWHM
center_wavelength_nm = 800
spectral_width_nm = 60
width_convention = intensity-fwhm
epsilon = 0.02
tau_as = 0.5
";

fn run_example() -> weakphase::Result<()> {
    let config = RunConfig::parse(CONFIG)?;
    let report = simulate(&config)?;
    print!("{}", to_json(&report)?);
    match RunConfig::parse("spectral_width = 60") {
        Err(e) => println!("rejected: {}: {e}", e.kind()),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

fn main() {
    run_example().expect("config report example");
}
