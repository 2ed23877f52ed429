//! Weak-value amplification of ultra-small time delays with broadband light.
//!
//! A photon prepared in `(|H> + i|V>)/sqrt(2)` crosses a birefringent element
//! that delays H against V, and is then projected onto a polarization nearly
//! orthogonal to the input. The surviving light is a tiny fraction of the
//! input, but its spectrum is displaced by an amount proportional to the
//! delay and amplified by `cot eps`. This crate computes those spectra,
//! probabilities and shifts, simulates a spectrometer reading them, and
//! inverts a measured shift back into a delay.
//!
//! * [`quantum`]: polarization states and weak values.
//! * [`spectral`]: Gaussian probes, frequency grids, unit conversion.
//! * [`amplification`]: closed forms and grid-integrated counterparts.
//! * [`detection`]: spectrometer model, centroid estimation, delay inversion
//!   and Monte Carlo precision studies.
//! * [`harness`]: configuration, figure sweeps and reports used by the
//!   `weakphase` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplification;
pub mod detection;
pub mod error;
pub mod harness;
pub mod quantum;
pub mod spectral;
pub mod sum;
pub mod units;

pub use error::{Error, Result};
