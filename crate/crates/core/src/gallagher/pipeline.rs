use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::explicit::explicit_psi_j_truncated;
use crate::model::{to_f64, Exponent, LengthSpectrum, ManifoldParams, SingularityCatalog, SmoothingPlan};
use crate::sum::NeumaierSum;

use super::difference::{bspline_cdf, try_forward_difference};
use super::plan::unconditional_exponent;

fn smoothed(psi_j_eval: impl Fn(f64) -> Result<f64>, x: f64, d: f64, j: u32) -> Result<f64> {
    Ok(try_forward_difference(psi_j_eval, x, d, j)? / d.powi(j as i32))
}

fn plan_step(plan: &SmoothingPlan, x: f64) -> Result<f64> {
    if !(x > E.powf(E)) {
        return Err(Error::invalid("x", format!("must exceed e^e so that log log x > 1, got {x}")));
    }
    let d = plan.step(x);
    if d > x {
        return Err(Error::invalid("x", format!("step d = {d} exceeds x = {x}")));
    }
    Ok(d)
}

/// d^(-j) Delta_j^+ psi_j(x) with d taken from the plan.
pub fn smooth_psi0_estimate<F>(psi_j_eval: F, plan: &SmoothingPlan, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = plan_step(plan, x)?;
    smoothed(psi_j_eval, x, d, plan.j)
}

/// d^(-j) Delta_j^+ psi_j(x) over a spectrum, differenced record by record:
/// records with N <= x contribute their full weight and those in (x, x + jd]
/// a B-spline fraction of it. Avoids the cancellation of differencing the
/// accumulated psi_j values.
pub fn smooth_spectrum_step(spectrum: &LengthSpectrum, x: f64, d: f64, j: u32) -> Result<f64> {
    let reach = x + f64::from(j) * d;
    spectrum.ensure_covers(reach)?;
    let mut acc = NeumaierSum::new();
    acc.add(spectrum.cumulative_weight(x));
    let start = spectrum.count_upto(x);
    let end = spectrum.count_upto(reach);
    for r in &spectrum.records()[start..end] {
        let u = (x - r.norm) / d;
        acc.add(r.weight * r.multiplicity as f64 * bspline_cdf(u, j));
    }
    Ok(acc.value())
}

/// [`smooth_psi0_estimate`] specialised to a spectrum.
pub fn smooth_psi0_spectrum(spectrum: &LengthSpectrum, plan: &SmoothingPlan, x: f64) -> Result<f64> {
    let d = plan_step(plan, x)?;
    smooth_spectrum_step(spectrum, x, d, plan.j)
}

#[derive(Debug, Clone, Copy)]
pub enum PsiSource<'a> {
    Spectrum(&'a LengthSpectrum),
    Catalog(&'a SingularityCatalog),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnconditionalEstimate {
    pub estimate: f64,
    pub error_exponent: Exponent,
    /// d = x^(1 - rho/n)
    pub step: f64,
    /// K = x^(rho/n)
    pub truncation: f64,
}

/// Smoothed psi_0 with d = x^(1 - rho/n) and critical sums truncated at
/// K = x^(rho/n); the predicted error exponent 2 rho - rho/n does not depend on j.
pub fn unconditional_psi0(
    source: PsiSource<'_>,
    params: &ManifoldParams,
    j: u32,
    x: f64,
) -> Result<UnconditionalEstimate> {
    let error_exponent = unconditional_exponent(params, j)?;
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::invalid("x", format!("must be a finite value > 1, got {x}")));
    }
    let q = to_f64(params.rho()) / f64::from(params.n());
    let step = x.powf(1.0 - q);
    let truncation = x.powf(q);
    let estimate = match source {
        PsiSource::Spectrum(s) => smooth_spectrum_step(s, x, step, j)?,
        PsiSource::Catalog(c) => {
            smoothed(|t| explicit_psi_j_truncated(c, t, j, truncation), x, step, j)?
        }
    };
    Ok(UnconditionalEstimate {
        estimate,
        error_exponent,
        step,
        truncation,
    })
}
