//! pi_Gamma against sums of li(x^alpha) over the catalog's real singularities.

use std::io::Write;

use pgt_core::chebyshev::pi_gamma;
use pgt_core::gallagher::{limit_exponent, solve_plan};
use pgt_core::li::li;
use pgt_core::model::{to_f64, Exponent, LengthSpectrum, SingularityCatalog};
use serde::Serialize;

use crate::grid::GridSpec;
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompareMode {
    /// Cutoff 2 rho - rho (2j+1)/(2nj+1); bound x^e (log x)^(l-1) (log log x)^(l+eps).
    Gallagher { j: u32, epsilon: f64 },
    /// Cutoff 2 rho - rho/n; bound x^e / log x.
    Unconditional { j: u32 },
}

impl CompareMode {
    pub fn name(&self) -> &'static str {
        match self {
            CompareMode::Gallagher { .. } => "gallagher",
            CompareMode::Unconditional { .. } => "unconditional",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub x: f64,
    pub pi_gamma: u64,
    pub li_sum: f64,
    pub remainder: f64,
    pub bound: f64,
}

struct Bound {
    cutoff: Exponent,
    log: f64,
    log_log: Option<f64>,
}

fn bound_shape(catalog: &SingularityCatalog, mode: CompareMode) -> anyhow::Result<Bound> {
    let params = &catalog.params;
    Ok(match mode {
        CompareMode::Gallagher { j, epsilon } => {
            let plan = solve_plan(params, j, epsilon)?;
            let l = to_f64(&plan.error_log_exponent);
            Bound { cutoff: plan.error_x_exponent, log: l - 1.0, log_log: Some(l + epsilon) }
        }
        CompareMode::Unconditional { j } => {
            pgt_core::gallagher::unconditional_exponent(params, j)?;
            Bound { cutoff: limit_exponent(params), log: -1.0, log_log: None }
        }
    })
}

/// sign * order * li(x^alpha) over real singularities with cutoff < alpha <= 2 rho.
pub fn li_sum(catalog: &SingularityCatalog, cutoff: f64, x: f64) -> anyhow::Result<f64> {
    let two_rho = catalog.params.two_rho_f64();
    let mut total = 0.0;
    for ch in &catalog.channels {
        for s in ch.real_singularities() {
            let a = s.alpha.re;
            if a > cutoff && a <= two_rho {
                total += f64::from(ch.sign()) * f64::from(s.order) * li(x.powf(a))?;
            }
        }
    }
    Ok(total)
}

pub fn pgt_compare(
    spectrum: &LengthSpectrum,
    catalog: &SingularityCatalog,
    mode: CompareMode,
    grid: &GridSpec,
) -> anyhow::Result<Vec<CompareRow>> {
    let shape = bound_shape(catalog, mode)?;
    let Some(max) = grid.max() else {
        return Ok(Vec::new());
    };
    spectrum.ensure_covers(max)?;
    let cutoff = to_f64(&shape.cutoff);
    grid.points()
        .into_iter()
        .map(|x| {
            let pi = pi_gamma(spectrum, x)?;
            let sum = li_sum(catalog, cutoff, x)?;
            let lx = x.ln();
            let mut bound = x.powf(cutoff) * lx.powf(shape.log);
            if let Some(e) = shape.log_log {
                bound *= lx.ln().powf(e);
            }
            Ok(CompareRow { x, pi_gamma: pi, li_sum: sum, remainder: pi as f64 - sum, bound })
        })
        .collect()
}

pub fn write_compare_csv<W: Write>(
    rows: &[CompareRow],
    manifest: &RunManifest,
    mut out: W,
) -> anyhow::Result<()> {
    writeln!(out, "{}", manifest.csv_comment())?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["x", "pi_gamma", "li_sum", "remainder", "bound"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
