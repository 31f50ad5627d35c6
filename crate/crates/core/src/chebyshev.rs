//! Chebyshev counting functions of a length spectrum.
//!
//! psi_0(x) sums Lambda(gamma) over classes of norm <= x (the jump is
//! included, so psi_0 is right-continuous) and psi_j is its j-fold iterated
//! integral from 0, which for a step function has the closed form
//! (1/j!) sum Lambda(gamma) (x - N(gamma))^j.

use crate::error::{Error, Result};
use crate::model::LengthSpectrum;
use crate::sum::NeumaierSum;

/// An evaluation point of the counting functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingQuery {
    pub x: f64,
    pub j: u32,
}

impl CountingQuery {
    pub fn new(x: f64, j: u32) -> Result<Self> {
        if !(x > 1.0) {
            return Err(Error::invalid("x", format!("must exceed 1, got {x}")));
        }
        Ok(Self { x, j })
    }

    pub fn eval(&self, spectrum: &LengthSpectrum) -> Result<f64> {
        psi_j(spectrum, self.x, self.j)
    }
}

pub fn psi0(spectrum: &LengthSpectrum, x: f64) -> Result<f64> {
    spectrum.ensure_covers(x)?;
    Ok(spectrum.cumulative_weight(x))
}

/// psi_j for any j >= 0 (j = 0 is psi_0).
pub fn psi_j(spectrum: &LengthSpectrum, x: f64, j: u32) -> Result<f64> {
    if j == 0 {
        return psi0(spectrum, x);
    }
    spectrum.ensure_covers(x)?;
    let k = spectrum.count_upto(x);
    let mut acc = NeumaierSum::new();
    for r in &spectrum.records()[..k] {
        acc.add(r.weight * r.multiplicity as f64 * (x - r.norm).powi(j as i32));
    }
    Ok(acc.value() / factorial(j))
}

/// Number of primitive classes of norm <= x.
pub fn pi_gamma(spectrum: &LengthSpectrum, x: f64) -> Result<u64> {
    spectrum.ensure_covers(x)?;
    let k = spectrum.count_upto(x);
    Ok(spectrum.records()[..k]
        .iter()
        .filter(|r| r.primitive)
        .map(|r| r.multiplicity)
        .sum())
}

pub(crate) fn factorial(j: u32) -> f64 {
    (1..=j).map(f64::from).product()
}
