use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The query point lies beyond the range where the data is known to be complete.
    #[error("x = {x} exceeds the completeness bound {bound} of the data")]
    IncompleteData { x: f64, bound: f64 },

    #[error("trace {0} is not hyperbolic (need t >= 3)")]
    NonHyperbolicTrace(i64),

    #[error("order j = {j} is below the required minimum {min}")]
    OrderTooSmall { j: u32, min: u32 },

    #[error("degenerate denominator |alpha + {k}| < 1e-12 at alpha = {alpha}")]
    DegenerateDenominator { alpha: Complex64, k: u32 },

    #[error("imaginary residue {residue:e} is too large for a value of {value:e}")]
    ImaginaryResidue { residue: f64, value: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
