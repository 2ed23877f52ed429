// Closed-form probability and shift against direct grid integration.

use weakphase::amplification::{
    closed_form_probability, closed_form_shift, numeric_probability, numeric_shift, CouplingParams,
};
use weakphase::spectral::{default_grid, gaussian_profile};

fn run_example() -> weakphase::Result<()> {
    let profile = gaussian_profile(3.1416e15, 5.236e14)?;
    let grid = default_grid(&profile);
    println!(
        "{:>9} {:>6} {:>22} {:>10} {:>22} {:>10}",
        "tau (s)", "eps", "T", "|dT|", "shift (rad/s)", "rel dw"
    );
    for tau in [1e-20, 1e-18, 1e-17, 1e-16, 1e-15] {
        for eps in [0.01, 0.1, 1.0] {
            let p = CouplingParams::new(tau, eps)?;
            let t = closed_form_probability(&profile, &p);
            let dw = closed_form_shift(&profile, &p)?;
            let t_num = numeric_probability(&p, &grid);
            let dw_num = numeric_shift(&p, &grid)?;
            println!(
                "{tau:>9.0e} {eps:>6} {t:>22.15e} {:>10.1e} {dw:>22.15e} {:>10.1e}",
                (t - t_num).abs(),
                ((dw - dw_num) / dw).abs()
            );
        }
    }
    Ok(())
}

fn main() {
    run_example().expect("postselection oracle example");
}
