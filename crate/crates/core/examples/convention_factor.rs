// Shift here versus the pulsed time-domain scheme at matched bandwidth.

use weakphase::amplification::{bs_convention_ratio, bs_scheme_shift, weak_limit, CouplingParams};
use weakphase::spectral::{gaussian_profile, time_domain_dual};

fn run_example() -> weakphase::Result<()> {
    let profile = gaussian_profile(3.1416e15, 5.236e14)?;
    let sigma = time_domain_dual(&profile).sigma;
    let tau = 1e-21;
    for eps in [1e-4, 1e-3, 1e-2, 0.1, 0.5] {
        let ours = weak_limit(&profile, &CouplingParams::new(tau, eps)?)?.shift;
        let theirs = bs_scheme_shift(tau, sigma, eps);
        println!(
            "eps = {eps:<7} ratio = {:.9}  eps cot(eps)/2 = {:.9}",
            ours / theirs,
            bs_convention_ratio(eps)?
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("convention factor example");
}
