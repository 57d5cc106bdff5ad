//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Failure modes of the physics layer.
///
/// Construction errors (invalid parameters) and runtime errors (vanishing
/// denominators, non-converged integrals) share one enum so callers can
/// propagate them uniformly.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A parameter violates a hard invariant (non-finite, wrong sign, ...).
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// Human-readable constraint that was violated.
        reason: String,
    },
    /// All four decay channels have zero radiative norm; no weights exist.
    NoRadiativeChannel,
    /// The spectral window collects no flux; gamma' is undefined.
    NoFluxInWindow,
    /// An adaptive integral did not reach the requested tolerance.
    QuadratureNotConverged {
        /// Best available estimate of the integral (real part).
        estimate_re: f64,
        /// Best available estimate of the integral (imaginary part).
        estimate_im: f64,
        /// Error bound attached to the estimate.
        error: f64,
        /// Number of panels at which subdivision was abandoned.
        panels: usize,
    },
    /// The candidate initial state has too little biexciton character for
    /// the transition-asymmetry metric to be meaningful.
    BiexcitonCharacterDiluted {
        /// Largest squared biexciton component among the eigenstates.
        max_weight: f64,
    },
    /// The Jacobi eigensolver exceeded its sweep budget.
    EigenNotConverged {
        /// Remaining off-diagonal norm when iteration stopped.
        off_norm: f64,
    },
    /// Every cell of an optimization grid failed to evaluate.
    AllCellsFailed,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            CoreError::NoRadiativeChannel => {
                write!(f, "no radiative channel: all four decay norms are zero")
            }
            CoreError::NoFluxInWindow => {
                write!(f, "no flux in window: filtered norms vanish, gamma' undefined")
            }
            CoreError::QuadratureNotConverged {
                estimate_re,
                estimate_im,
                error,
                panels,
            } => write!(
                f,
                "quadrature did not converge: estimate {estimate_re}{estimate_im:+}i, \
                 error bound {error:.3e} after {panels} panels"
            ),
            CoreError::BiexcitonCharacterDiluted { max_weight } => write!(
                f,
                "biexciton character diluted: largest |XX component|^2 = {max_weight:.3} < 0.2"
            ),
            CoreError::EigenNotConverged { off_norm } => {
                write!(f, "eigensolver did not converge: off-diagonal norm {off_norm:.3e}")
            }
            CoreError::AllCellsFailed => {
                write!(f, "every optimization grid cell failed to evaluate")
            }
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, CoreError>;

impl CoreError {
    /// Shorthand for [`CoreError::InvalidParameter`].
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
