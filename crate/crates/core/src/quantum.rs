//! Polarization-qubit algebra: Jones states, the which-path observable,
//! weak values and overlap probabilities.
//!
//! States are kets in the `{|H>, |V>}` basis stored in Cartesian complex form.
//! No global phase is ever removed; compare states with [`JonesState::fidelity`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;

/// Smallest `|<post|pre>|` accepted by [`weak_value`].
pub const DEFAULT_OVERLAP_FLOOR: f64 = 1e-15;

/// Normalized two-component polarization ket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonesState {
    h_amp: Complex64,
    v_amp: Complex64,
}

impl JonesState {
    pub const H: JonesState = JonesState {
        h_amp: Complex64::new(1.0, 0.0),
        v_amp: Complex64::new(0.0, 0.0),
    };

    pub const V: JonesState = JonesState {
        h_amp: Complex64::new(0.0, 0.0),
        v_amp: Complex64::new(1.0, 0.0),
    };

    /// Wraps amplitudes that are already unit-norm (checked in debug builds).
    fn from_normalized(h_amp: Complex64, v_amp: Complex64) -> Self {
        debug_assert!((h_amp.norm_sqr() + v_amp.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        JonesState { h_amp, v_amp }
    }

    pub fn h_amp(&self) -> Complex64 {
        self.h_amp
    }

    pub fn v_amp(&self) -> Complex64 {
        self.v_amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.h_amp.norm_sqr() + self.v_amp.norm_sqr()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &JonesState) -> Complex64 {
        self.h_amp.conj() * other.h_amp + self.v_amp.conj() * other.v_amp
    }

    /// `|<self|other>|^2`; 1 for physically identical states.
    pub fn fidelity(&self, other: &JonesState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Multiplies both amplitudes by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> JonesState {
        let phase = Complex64::from_polar(1.0, theta);
        JonesState {
            h_amp: self.h_amp * phase,
            v_amp: self.v_amp * phase,
        }
    }

    /// Applies the birefringent delay `diag(e^{-i phi}, e^{+i phi})` with
    /// `phi = omega * tau`: the H and V components end up `2 tau` apart.
    pub fn delayed(&self, phase: f64) -> JonesState {
        let (s, c) = phase.sin_cos();
        JonesState {
            h_amp: self.h_amp * Complex64::new(c, -s),
            v_amp: self.v_amp * Complex64::new(c, s),
        }
    }
}

/// Normalizes `(h_amp, v_amp)` to a unit ket, preserving its direction.
pub fn make_state(h_amp: Complex64, v_amp: Complex64) -> Result<JonesState> {
    let norm_sqr = h_amp.norm_sqr() + v_amp.norm_sqr();
    if !norm_sqr.is_finite() {
        return Err(Error::InvalidState("amplitudes must be finite".into()));
    }
    if norm_sqr <= 0.0 {
        return Err(Error::InvalidState("zero vector has no direction".into()));
    }
    let scale = norm_sqr.sqrt().recip();
    Ok(JonesState {
        h_amp: h_amp * scale,
        v_amp: v_amp * scale,
    })
}

/// Preselected state `(|H> + i|V>)/sqrt(2)`.
pub fn bs_preselection() -> JonesState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    JonesState::from_normalized(Complex64::new(s, 0.0), Complex64::new(0.0, s))
}

/// Postselected state `(i e^{i eps}|H> + e^{-i eps}|V>)/sqrt(2)`.
///
/// Overlap with [`bs_preselection`] is `sin^2 eps` and the weak value of the
/// which-path observable is `i cot eps`. The state is orthogonal to the
/// preselection at `eps = 0` and coincides with it (up to sign) at `pi/2`.
pub fn bs_postselection(epsilon: f64) -> Result<JonesState> {
    if !epsilon.is_finite() {
        return Err(Error::param(
            "epsilon",
            format!("must be finite, got {epsilon}"),
        ));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (sin, cos) = epsilon.sin_cos();
    // i e^{i eps} = -sin + i cos, e^{-i eps} = cos - i sin
    Ok(JonesState::from_normalized(
        Complex64::new(-sin * s, cos * s),
        Complex64::new(cos * s, -sin * s),
    ))
}

/// Diagonal two-level observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub h_eigenvalue: f64,
    pub v_eigenvalue: f64,
}

impl Observable {
    /// `A|H> = |H>`, `A|V> = -|V>`.
    pub const WHICH_PATH: Observable = Observable {
        h_eigenvalue: 1.0,
        v_eigenvalue: -1.0,
    };

    pub fn apply(&self, state: &JonesState) -> (Complex64, Complex64) {
        (
            state.h_amp * self.h_eigenvalue,
            state.v_amp * self.v_eigenvalue,
        )
    }
}

impl Default for Observable {
    fn default() -> Self {
        Observable::WHICH_PATH
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakValue {
    pub value: Complex64,
    /// `|<post|pre>|^2`
    pub overlap_probability: f64,
}

/// `<post|A|pre> / <post|pre>` with the default orthogonality floor.
pub fn weak_value(pre: &JonesState, post: &JonesState, obs: &Observable) -> Result<WeakValue> {
    weak_value_with_floor(pre, post, obs, DEFAULT_OVERLAP_FLOOR)
}

pub fn weak_value_with_floor(
    pre: &JonesState,
    post: &JonesState,
    obs: &Observable,
    overlap_floor: f64,
) -> Result<WeakValue> {
    let overlap = post.inner(pre);
    let overlap_probability = overlap.norm_sqr();
    if overlap.norm() <= overlap_floor {
        return Err(Error::OrthogonalPostselection {
            overlap_probability,
        });
    }
    let (a_h, a_v) = obs.apply(pre);
    let numerator = post.h_amp.conj() * a_h + post.v_amp.conj() * a_v;
    Ok(WeakValue {
        value: numerator / overlap,
        overlap_probability,
    })
}

/// Probability that a photon of frequency `omega` prepared in `pre`, delayed by
/// the birefringent element (`tau`), passes the projection onto `post`.
pub fn delayed_transmission(pre: &JonesState, post: &JonesState, omega: f64, tau: f64) -> f64 {
    post.fidelity(&pre.delayed(omega * tau))
}
