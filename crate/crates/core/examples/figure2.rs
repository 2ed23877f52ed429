// Postselection probability against delay: decay of the fringes to 1/2.
//
// `cargo run --example figure2 -- out.csv` also writes the table.

use weakphase::harness::{figure2, RunConfig};

fn run_example() -> weakphase::Result<weakphase::harness::SweepTable> {
    let config = RunConfig::default();
    let table = figure2(&config)?;
    let tau = table.column("tau_s").unwrap();
    let t = table.column("T_closed").unwrap();
    let t_num = table.column("T_numeric").unwrap();
    let worst = t
        .iter()
        .zip(&t_num)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!(
        "{} rows, T(0) = {:.9e}, max |T_closed - T_numeric| = {worst:.1e}",
        tau.len(),
        t[0]
    );
    for k in (0..tau.len()).step_by(tau.len() / 12) {
        println!("  tau = {:.3e} s  T = {:.6}", tau[k], t[k]);
    }
    Ok(table)
}

fn main() {
    let table = run_example().expect("figure 2 example");
    if let Some(path) = std::env::args().nth(1) {
        table.write_csv(path.as_ref()).expect("write csv");
    }
}
