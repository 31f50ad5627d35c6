use anyhow::bail;
use serde::Serialize;

pub const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares slope of log|r| against log x, skipping zero remainders and
/// non-positive x.
pub fn fit_exponent(series: &[(f64, f64)]) -> anyhow::Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(x, r)| *x > 0.0 && *r != 0.0 && r.is_finite())
        .map(|(x, r)| (x.ln(), r.abs().ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        bail!("need at least {MIN_FIT_POINTS} usable points (nonzero remainder), got {}", pts.len());
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        bail!("all usable points share the same x");
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(ExponentFit { slope, stderr, intercept, points: pts.len() })
}
