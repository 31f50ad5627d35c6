use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::explicit::critical_band;
use crate::explicit::term_weight;
use crate::model::{
    to_f64, ExceptionalReport, IntervalMeasure, SingularityCatalog, SmoothingPlan,
};

pub const DEFAULT_GRID_DENSITY: usize = 512;

/// Which remainder an exceptional set is measured for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Truncated critical sums at the psi_j level; threshold x^gamma (log x)^beta (log log x)^(beta + eps).
    PsiJ,
    /// psi_0 remainders; threshold uses the psi_0 error exponents in place of gamma and beta.
    Psi0,
}

/// x^g (log x)^b (log log x)^(b + eps) for the level's exponents (g, b).
pub fn threshold(plan: &SmoothingPlan, level: Level, x: f64) -> f64 {
    let (g, b) = match level {
        Level::PsiJ => (to_f64(&plan.gamma_exp), to_f64(&plan.beta)),
        Level::Psi0 => (to_f64(&plan.error_x_exponent), to_f64(&plan.error_log_exponent)),
    };
    let lx = x.ln();
    x.powf(g) * lx.powf(b) * lx.ln().powf(b + plan.epsilon)
}

/// Logarithmic measure of {x in [e^i, e^(i+1)] : |remainder(x)| > threshold(x)}
/// for each i, by a midpoint rule with `grid_density` points uniform in log x.
pub fn exceptional_report<F>(
    remainder: F,
    plan: &SmoothingPlan,
    level: Level,
    i_range: RangeInclusive<i64>,
    grid_density: usize,
) -> Result<ExceptionalReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if i_range.is_empty() {
        return Err(Error::invalid("i_range", "must contain at least one interval"));
    }
    if *i_range.start() < 1 {
        return Err(Error::invalid("i_range", "intervals must start at i >= 1 so that log log x > 0"));
    }
    if grid_density == 0 {
        return Err(Error::invalid("grid_density", "must be positive"));
    }
    let points: Vec<(i64, f64)> = i_range
        .clone()
        .flat_map(|i| {
            (0..grid_density).map(move |k| (i, i as f64 + (k as f64 + 0.5) / grid_density as f64))
        })
        .collect();
    let exceed: Vec<bool> = points
        .par_iter()
        .map(|&(_, lx)| {
            let x = lx.exp();
            Ok(remainder(x)?.abs() > threshold(plan, level, x))
        })
        .collect::<Result<_>>()?;
    let intervals = i_range
        .enumerate()
        .map(|(idx, i)| {
            let hits = exceed[idx * grid_density..(idx + 1) * grid_density]
                .iter()
                .filter(|&&e| e)
                .count();
            IntervalMeasure {
                i,
                exceed_measure: hits as f64 / grid_density as f64,
            }
        })
        .collect();
    Ok(ExceptionalReport::new(intervals, plan.epsilon))
}

/// psi_j-level remainder: the critical sum over Y(x) < |Im alpha| <= W of the
/// principal channels, with Y from the plan.
pub fn critical_remainder<'a>(
    catalog: &'a SingularityCatalog,
    plan: &'a SmoothingPlan,
    w_height: f64,
) -> impl Fn(f64) -> Result<f64> + Sync + 'a {
    move |x| {
        let y = plan.split_height(x);
        let parts = critical_band(catalog, x, plan.j, y, w_height)?;
        Ok(parts.iter().sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeResult {
    pub finite_trend: bool,
    /// Fitted slope of log(measure) against log(i (log i)^(1 + 2 eps));
    /// negative infinity when no interval has positive measure.
    pub fitted_rate: f64,
}

/// Trend test for sum_i measure_i < infinity. Fits log(measure) against
/// log(i (log i)^(1 + 2 eps)) over the intervals with positive measure; the
/// trend is finite when the slope is at most -1 within two standard errors.
/// With fewer than three positive entries no slope is fitted: the trend is
/// finite when the exceedance has died out before the last interval.
pub fn converge_check(report: &ExceptionalReport) -> ConvergeResult {
    let eps = report.epsilon;
    let pts: Vec<(f64, f64)> = report
        .intervals
        .iter()
        .filter(|m| m.i >= 2 && m.exceed_measure > 0.0)
        .map(|m| {
            let li = m.i as f64;
            ((li * li.ln().powf(1.0 + 2.0 * eps)).ln(), m.exceed_measure.ln())
        })
        .collect();
    if pts.len() < 3 {
        let last_positive = report.intervals.iter().rev().position(|m| m.exceed_measure > 0.0);
        return ConvergeResult {
            finite_trend: last_positive.is_none_or(|p| p > 0),
            fitted_rate: f64::NEG_INFINITY,
        };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = (resid / (n - 2.0) / sxx).sqrt();
    ConvergeResult {
        finite_trend: slope <= -1.0 + 2.0 * stderr,
        fitted_rate: slope,
    }
}

/// int (sum_{t <= |Im alpha| <= t + 1, y < |Im alpha| <= w} prod_k |alpha + k|^(-1))^2 dt
/// over the principal channels, evaluated exactly: each singularity at height h
/// contributes an indicator of [h - 1, h], and two indicators overlap on
/// max(0, 1 - |h - h'|).
pub fn gallagher_integral(catalog: &SingularityCatalog, j: u32, y: f64, w: f64) -> f64 {
    let mut pts: Vec<(f64, f64)> = catalog
        .principal_channels()
        .flat_map(|ch| ch.critical_singularities().iter())
        .filter(|s| s.height() > y && s.height() <= w)
        .map(|s| (s.height(), term_weight(s, j)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let len = pts.len();
    // suffix sums from the top, where the terms are smallest
    let mut sw = vec![0.0; len + 1];
    let mut swh = vec![0.0; len + 1];
    for k in (0..len).rev() {
        sw[k] = sw[k + 1] + pts[k].1;
        swh[k] = swh[k + 1] + pts[k].1 * pts[k].0;
    }
    let range = |lo: usize, hi: usize| (sw[lo] - sw[hi], swh[lo] - swh[hi]);
    let mut total = 0.0;
    for (i, &(h, wi)) in pts.iter().enumerate().rev() {
        let lo = pts.partition_point(|p| p.0 <= h - 1.0);
        let hi = pts.partition_point(|p| p.0 < h + 1.0);
        // below (and including) i: w_k (1 - h + h_k); above: w_k (1 + h - h_k)
        let (wb, whb) = range(lo, i + 1);
        let (wa, wha) = range(i + 1, hi);
        total += wi * ((1.0 - h) * wb + whb + (1.0 + h) * wa - wha);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallagher::solve_plan;
    use crate::model::{Channel, ManifoldParams, Singularity};

    fn plan() -> SmoothingPlan {
        solve_plan(&ManifoldParams::modular_surface(), 2, 0.01).unwrap()
    }

    #[test]
    fn zero_and_full_exceedance() {
        let p = plan();
        let r = exceptional_report(|_| Ok(0.0), &p, Level::PsiJ, 3..=6, 64).unwrap();
        assert!(r.intervals.iter().all(|m| m.exceed_measure == 0.0));
        assert_eq!(r.total_measure, 0.0);
        for level in [Level::PsiJ, Level::Psi0] {
            let r = exceptional_report(|x| Ok(2.0 * threshold(&p, level, x)), &p, level, 3..=6, 64).unwrap();
            assert!(r.intervals.iter().all(|m| m.exceed_measure == 1.0));
            assert_eq!(r.total_measure, 4.0);
        }
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 6..=3;
        assert!(exceptional_report(|_| Ok(0.0), &p, Level::PsiJ, empty, 64).is_err());
    }

    fn report(measures: impl Iterator<Item = (i64, f64)>) -> ExceptionalReport {
        ExceptionalReport::new(
            measures.map(|(i, m)| IntervalMeasure { i, exceed_measure: m }).collect(),
            0.01,
        )
    }

    #[test]
    fn convergence_verdicts() {
        let conv = report((3..=20).map(|i| (i, 1.0 / (i as f64 * (i as f64).ln().powi(2)))));
        assert!(converge_check(&conv).finite_trend);
        let div = report((3..=20).map(|i| (i, 1.0 / (i as f64).ln())));
        assert!(!converge_check(&div).finite_trend);
        let zero = report((3..=20).map(|i| (i, 0.0)));
        let z = converge_check(&zero);
        assert!(z.finite_trend);
        assert_eq!(z.fitted_rate, f64::NEG_INFINITY);
    }

    fn brute_integral(hs: &[(f64, f64)]) -> f64 {
        let mut s = 0.0;
        for &(a, wa) in hs {
            for &(b, wb) in hs {
                s += wa * wb * (1.0 - (a - b).abs()).max(0.0);
            }
        }
        s
    }

    #[test]
    fn integral_matches_pairwise_overlap() {
        let params = ManifoldParams::modular_surface();
        let heights = [1.2, 1.9, 2.05, 3.5, 3.6, 3.61, 5.0, 7.7, 8.1];
        let crit: Vec<Singularity> = heights
            .iter()
            .flat_map(|&h| [Singularity::critical(0.5, h, 1), Singularity::critical(0.5, -h, 1)])
            .collect();
        let cat = SingularityCatalog::new(params, vec![Channel::new(1, "t", 1.0, vec![], crit.clone())], 1.0);
        for j in [2, 3] {
            for (y, w) in [(0.0, 100.0), (2.0, 8.0), (3.55, 3.61)] {
                let pts: Vec<(f64, f64)> = crit
                    .iter()
                    .filter(|s| s.height() > y && s.height() <= w)
                    .map(|s| (s.height(), term_weight(s, j)))
                    .collect();
                let got = gallagher_integral(&cat, j, y, w);
                let expect = brute_integral(&pts);
                assert!((got - expect).abs() <= 1e-12 * expect.max(1e-300), "{got} {expect}");
            }
        }
    }
}
