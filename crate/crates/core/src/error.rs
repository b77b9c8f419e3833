use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("stress field is singular at the load point (x = 0, z = 0)")]
    Singularity,

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("time step {dt:.3e} s exceeds resolution guard {limit:.3e} s")]
    ResolutionGuard { dt: f64, limit: f64 },

    #[error("calibration search does not bracket the target: {0}")]
    NonBracketing(String),

    #[error("signal never reaches {level:.1}% of its settled value")]
    NeverReaches { level: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("column `{0}` not present in data")]
    MissingColumn(String),

    #[error("no data to plot")]
    EmptySeries,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical guard (singularity, resolution, bracketing).
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::Singularity
                | Error::NonUnitary { .. }
                | Error::ResolutionGuard { .. }
                | Error::NonBracketing(_)
                | Error::NeverReaches { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects values that are not finite and strictly positive.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}
