use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;
use weakphase::quantum::{
    bs_postselection, bs_preselection, make_state, weak_value, JonesState, Observable,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #[test]
    fn weak_value_is_i_cot_epsilon(eps in 1e-4f64..=FRAC_PI_2) {
        let w = weak_value(&bs_preselection(), &bs_postselection(eps).unwrap(), &Observable::WHICH_PATH).unwrap();
        let cot = 1.0 / eps.tan();
        prop_assert!(w.value.re.abs() <= 1e-10 * cot.max(1e-6));
        if eps < 1.5 {
            prop_assert!(rel(w.value.im, cot) < 1e-10, "eps {eps}: {} vs {cot}", w.value.im);
        } else {
            prop_assert!((w.value.im - cot).abs() < 1e-15);
        }
    }

    #[test]
    fn global_phases_change_nothing(eps in 1e-3f64..1.5, a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let pre = bs_preselection();
        let post = bs_postselection(eps).unwrap();
        let base = weak_value(&pre, &post, &Observable::WHICH_PATH).unwrap();
        let moved = weak_value(&pre.with_global_phase(a), &post.with_global_phase(b), &Observable::WHICH_PATH).unwrap();
        prop_assert!((moved.value - base.value).norm() <= 1e-12 * base.value.norm());
        prop_assert!((moved.overlap_probability - base.overlap_probability).abs() <= 1e-12);
    }

    #[test]
    fn eigenstates_return_eigenvalues(h in -5.0f64..5.0, v in -5.0f64..5.0, phase in -3.0f64..3.0) {
        let obs = Observable { h_eigenvalue: h, v_eigenvalue: v };
        let h_state = JonesState::H.with_global_phase(phase);
        let v_state = make_state(Complex64::new(0.0, 0.0), Complex64::from_polar(2.0, phase)).unwrap();
        let wh = weak_value(&h_state, &JonesState::H, &obs).unwrap();
        let wv = weak_value(&v_state, &v_state, &obs).unwrap();
        prop_assert!((wh.value - Complex64::new(h, 0.0)).norm() <= 4.0 * f64::EPSILON * h.abs().max(1.0));
        prop_assert!((wv.value - Complex64::new(v, 0.0)).norm() <= 4.0 * f64::EPSILON * v.abs().max(1.0));
    }
}

#[test]
fn overlap_is_sin_squared_epsilon() {
    for k in 0..=40 {
        let eps = 1e-4 * 10f64.powf(k as f64 / 10.0);
        let w = weak_value(
            &bs_preselection(),
            &bs_postselection(eps).unwrap(),
            &Observable::WHICH_PATH,
        )
        .unwrap();
        let expected = eps.sin().powi(2);
        assert!(
            (w.overlap_probability - expected).abs() < 1e-12,
            "eps {eps}"
        );
        assert!(rel(w.overlap_probability, expected) < 1e-9, "eps {eps}");
    }
}
