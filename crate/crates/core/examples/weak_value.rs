// Weak value of the which-path observable for the nearly crossed states.

use weakphase::quantum::{bs_postselection, bs_preselection, weak_value, Observable};

fn run_example() -> weakphase::Result<()> {
    let pre = bs_preselection();
    for eps in [1e-3, 1e-2, 0.1, 0.5, std::f64::consts::FRAC_PI_2] {
        let post = bs_postselection(eps)?;
        let w = weak_value(&pre, &post, &Observable::WHICH_PATH)?;
        println!(
            "eps = {eps:<8.4} A_w = {:+.3e} {:+.6e}i  cot(eps) = {:.6e}  |<post|pre>|^2 = {:.3e}",
            w.value.re,
            w.value.im,
            1.0 / eps.tan(),
            w.overlap_probability
        );
    }
    // Exactly crossed states have no weak value.
    let crossed = weak_value(&pre, &bs_postselection(0.0)?, &Observable::WHICH_PATH);
    println!(
        "eps = 0 -> {}",
        crossed
            .map(|_| "defined".to_string())
            .unwrap_or_else(|e| e.kind().into())
    );
    Ok(())
}

fn main() {
    run_example().expect("weak value example");
}
