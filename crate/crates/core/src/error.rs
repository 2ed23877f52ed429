use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Each variant has a stable snake-case name (see [`Error::kind`]) which the
/// command-line front end prints so scripts can match on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "pre- and post-selected states are orthogonal (|<post|pre>|^2 = {overlap_probability:e})"
    )]
    OrthogonalPostselection { overlap_probability: f64 },

    #[error("postselection probability {probability:e} is below the floor {floor:e}")]
    ZeroPostselection { probability: f64, floor: f64 },

    #[error("spectrum carries no weight")]
    EmptySpectrum,

    #[error("amplification factor is undefined at zero delay")]
    UndefinedGain,

    #[error("{fraction_outside:.3} of the spectrum falls outside the detector range")]
    DetectorMisconfigured { fraction_outside: f64 },

    #[error("no photons were detected")]
    NoSignal,

    #[error("shift {shift:e} rad/s has no root in the delay bracket [{low:e}, {high:e}] s")]
    OutOfRangeShift { shift: f64, low: f64, high: f64 },

    #[error("shift {shift:e} rad/s is reached on a non-monotone part of the bracket; tighten the bracket below {bracket:e} s")]
    AmbiguousShift { shift: f64, bracket: f64 },

    #[error("{failed} of {total} trials failed; last error: {last}")]
    StudyDegenerate {
        failed: usize,
        total: usize,
        last: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Stable machine-readable name of the error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidState(_) => "invalid_state",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::OrthogonalPostselection { .. } => "orthogonal_postselection",
            Error::ZeroPostselection { .. } => "zero_postselection",
            Error::EmptySpectrum => "empty_spectrum",
            Error::UndefinedGain => "undefined_gain",
            Error::DetectorMisconfigured { .. } => "detector_misconfigured",
            Error::NoSignal => "no_signal",
            Error::OutOfRangeShift { .. } => "out_of_range_shift",
            Error::AmbiguousShift { .. } => "ambiguous_shift",
            Error::StudyDegenerate { .. } => "study_degenerate",
            Error::Config(_) => "config_error",
            Error::UnknownKey(_) => "unknown_config_key",
            Error::Io { .. } => "io_error",
        }
    }
}
