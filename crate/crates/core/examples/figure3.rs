// Shift and gain panels: smaller eps and wider spectra give larger shifts.
//
// `cargo run --example figure3 -- out_dir` also writes the four tables.

use weakphase::harness::{figure3, Figure3, RunConfig};

fn run_example() -> weakphase::Result<Figure3> {
    let figure = figure3(&RunConfig::default())?;
    for (name, table) in figure.tables() {
        let header: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
        println!(
            "{name}: {} rows, columns {}",
            table.rows().len(),
            header.join(", ")
        );
    }
    let d = &figure.gain_vs_epsilon;
    let eps = d.column("epsilon").unwrap();
    let gain = d.column("gain_width_100nm").unwrap();
    let k = eps.iter().position(|&e| e == 0.01).unwrap();
    println!(
        "G(tau = 10 as, 100 nm, eps = 0.01) = {:.15} (cot eps = {:.3})",
        gain[k],
        1.0 / 0.01f64.tan()
    );
    Ok(figure)
}

fn main() {
    let figure = run_example().expect("figure 3 example");
    if let Some(dir) = std::env::args().nth(1) {
        for (name, table) in figure.tables() {
            table
                .write_csv(&std::path::Path::new(&dir).join(name))
                .expect("write csv");
        }
    }
}
