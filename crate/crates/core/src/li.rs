//! The logarithmic integral li(x), principal value of int_0^x dt / log t.

use crate::error::{Error, Result};

pub const DEFAULT_LI_TOLERANCE: f64 = 1e-12;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn li(x: f64) -> Result<f64> {
    li_with_tolerance(x, DEFAULT_LI_TOLERANCE)
}

/// li(x) = Ei(log x) = gamma + log log x + sum_{k>=1} (log x)^k / (k k!),
/// summed until the next term drops below `tol` (absolute) or below the
/// rounding level of the partial sum. For x > 1 all terms are positive.
pub fn li_with_tolerance(x: f64, tol: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::invalid("x", format!("li needs x > 1, got {x}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let l = x.ln();
    let mut power = 1.0; // l^k / k!
    let mut series = 0.0;
    let mut k = 1.0;
    loop {
        power *= l / k;
        let term = power / k;
        series += term;
        if k > l && (term < tol || term < series * f64::EPSILON * 0.5) {
            break;
        }
        k += 1.0;
    }
    Ok(EULER_GAMMA + l.ln() + series)
}
