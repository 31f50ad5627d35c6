//! Explicit formulas over singularity catalogs.
//!
//! For j >= n,
//!
//! ```text
//! psi_j(x) = sum_p (-1)^(p+1) sum_(tau,lambda) [ sum_{rho < alpha <= 2 rho} T_j(alpha)
//!                                               + sum_{Re alpha = rho, lambda = 2 rho} T_j(alpha) ]
//! T_j(alpha) = o_alpha x^(alpha + j) / prod_{k=0}^{j} (alpha + k)
//! ```
//!
//! Terms are accumulated as complex numbers; the imaginary residue left by a
//! conjugate-closed catalog is checked rather than dropped. Channels are
//! evaluated in parallel and reduced in channel order, so results do not
//! depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Channel, ManifoldParams, Singularity, SingularityCatalog, Theorem4Config};

const DENOMINATOR_FLOOR: f64 = 1e-12;
const RESIDUE_TOLERANCE: f64 = 1e-8;

/// Leading contribution x^(2 rho) / (2 rho) of the pole at alpha = 2 rho.
pub fn main_term(params: &ManifoldParams, x: f64) -> f64 {
    let two_rho = params.two_rho_f64();
    x.powf(two_rho) / two_rho
}

/// o x^(alpha + j) / prod_{k=0}^{j} (alpha + k).
pub fn singularity_term(s: &Singularity, log_x: f64, j: u32) -> Result<Complex64> {
    let mut denom = Complex64::new(1.0, 0.0);
    for k in 0..=j {
        let z = s.alpha + f64::from(k);
        if z.norm() < DENOMINATOR_FLOOR {
            return Err(Error::DegenerateDenominator { alpha: s.alpha, k });
        }
        denom *= z;
    }
    let numer = ((s.alpha + f64::from(j)) * log_x).exp();
    Ok(numer / denom * f64::from(s.order))
}

/// prod_{k=0}^{j} |alpha + k|^(-1), weighted by |order|.
pub fn term_weight(s: &Singularity, j: u32) -> f64 {
    let prod: f64 = (0..=j).map(|k| (s.alpha + f64::from(k)).norm()).product();
    f64::from(s.order.unsigned_abs()) / prod
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    value: Complex64,
    magnitude: f64,
}

impl Partial {
    fn add(&mut self, term: Complex64) {
        self.value += term;
        self.magnitude += term.norm();
    }

    fn merge(mut self, other: Partial, sign: i8) -> Partial {
        self.value += other.value * f64::from(sign);
        self.magnitude += other.magnitude;
        self
    }

    fn real(self) -> Result<f64> {
        let residue = self.value.im.abs();
        let allowed =
            RESIDUE_TOLERANCE * self.value.re.abs() + 16.0 * f64::EPSILON * self.magnitude;
        if residue > allowed {
            return Err(Error::ImaginaryResidue {
                residue,
                value: self.value.re,
            });
        }
        Ok(self.value.re)
    }
}

fn reduce_channels<F>(catalog: &SingularityCatalog, per_channel: F) -> Result<Partial>
where
    F: Fn(&Channel) -> Result<Partial> + Sync,
{
    let parts: Vec<Result<Partial>> = catalog.channels.par_iter().map(&per_channel).collect();
    let mut total = Partial::default();
    for (ch, part) in catalog.channels.iter().zip(parts) {
        total = total.merge(part?, ch.sign());
    }
    Ok(total)
}

fn critical_sum(ch: &Channel, log_x: f64, j: u32, lower: f64, upper: f64) -> Result<Partial> {
    let crit = ch.critical_singularities();
    // sorted by height: locate the window lower < |Im| <= upper
    let start = crit.partition_point(|s| s.height() <= lower);
    let end = crit.partition_point(|s| s.height() <= upper);
    let mut acc = Partial::default();
    for s in &crit[start..end] {
        acc.add(singularity_term(s, log_x, j)?);
    }
    Ok(acc)
}

fn check_x(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::invalid("x", format!("must be a finite value > 1, got {x}")));
    }
    Ok(x.ln())
}

/// The explicit formula for psi_j, j >= n, with every critical singularity.
pub fn explicit_psi_j(catalog: &SingularityCatalog, x: f64, j: u32) -> Result<f64> {
    explicit_psi_j_truncated(catalog, x, j, f64::INFINITY)
}

/// As [`explicit_psi_j`] with the critical sum restricted to |Im alpha| <= `max_height`.
pub fn explicit_psi_j_truncated(
    catalog: &SingularityCatalog,
    x: f64,
    j: u32,
    max_height: f64,
) -> Result<f64> {
    let n = catalog.params.n();
    if j < n {
        return Err(Error::OrderTooSmall { j, min: n });
    }
    let log_x = check_x(x)?;
    let rho = catalog.params.rho_f64();
    let two_rho = catalog.params.two_rho_f64();
    let params = &catalog.params;
    reduce_channels(catalog, |ch| {
        let mut acc = Partial::default();
        for s in ch.real_singularities() {
            // strict lower bound rho < alpha, as printed
            if s.alpha.re > rho && s.alpha.re <= two_rho {
                acc.add(singularity_term(s, log_x, j)?);
            }
        }
        if ch.is_principal(params) {
            let crit = critical_sum(ch, log_x, j, -1.0, max_height)?;
            acc = acc.merge(crit, 1);
        }
        Ok(acc)
    })?
    .real()
}

/// Critical-line sums over lower < |Im alpha| <= upper, one value per
/// principal (lambda = 2 rho) channel, each including its channel sign.
pub fn critical_band(
    catalog: &SingularityCatalog,
    x: f64,
    j: u32,
    lower: f64,
    upper: f64,
) -> Result<Vec<f64>> {
    let log_x = check_x(x)?;
    catalog
        .principal_channels()
        .map(|ch| {
            let part = critical_sum(ch, log_x, j, lower, upper)?;
            Ok(f64::from(ch.sign()) * part.real()?)
        })
        .collect()
}

/// x^(rho + j) sum_{|Im alpha| > y} prod |alpha + k|^(-1) over principal
/// channels: a bound on the error of truncating the critical sum at height y.
pub fn truncation_tail_majorant(catalog: &SingularityCatalog, x: f64, j: u32, y: f64) -> f64 {
    let tail: f64 = catalog
        .principal_channels()
        .map(|ch| {
            let crit = ch.critical_singularities();
            let start = crit.partition_point(|s| s.height() <= y);
            // smallest terms first
            crit[start..].iter().rev().map(|s| term_weight(s, j)).sum::<f64>()
        })
        .sum();
    x.powf(catalog.params.rho_f64() + f64::from(j)) * tail
}

/// Value of the conditional psi_{n-1} formula and the size of its implied
/// O-term, x^(2 rho + eps1 + n - 1) / (eps1 T^(1 - delta)), which is reported
/// but not added.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem4Value {
    pub value: f64,
    pub reported_bound: f64,
}

pub fn explicit_psi_nminus1(
    catalog: &SingularityCatalog,
    config: &Theorem4Config,
    x: f64,
) -> Result<Theorem4Value> {
    let n = catalog.params.n();
    config.validate(n)?;
    let log_x = check_x(x)?;
    let j = n - 1;

    let mut poly = 0.0;
    for k in 0..n as usize {
        let power = x.powi((n as usize - 1 - k) as i32);
        poly += config.poly_log_coeffs[k] * power * log_x + config.poly_coeffs[k] * power;
    }

    let height = config.truncation_height;
    // Real singularities at 0, -1, ..., -(n-1) hit a zero denominator and are rejected there.
    let singular = reduce_channels(catalog, |ch| {
        let mut acc = Partial::default();
        for s in ch.real_singularities() {
            acc.add(singularity_term(s, log_x, j)?);
        }
        let crit = critical_sum(ch, log_x, j, -1.0, height)?;
        Ok(acc.merge(crit, 1))
    })?
    .real()?;

    let two_rho = catalog.params.two_rho_f64();
    let eps1 = config.epsilon1;
    let reported_bound = x.powf(two_rho + eps1 + f64::from(n) - 1.0)
        / (eps1 * height.powf(1.0 - config.delta));
    Ok(Theorem4Value {
        value: poly + singular,
        reported_bound,
    })
}

/// Shape of one synthetic channel.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylChannelSpec {
    pub p: u32,
    pub tau: String,
    /// Defaults to 2 rho.
    pub lambda: Option<f64>,
    pub real_singularities: Vec<Singularity>,
}

impl WeylChannelSpec {
    /// p = 1 (sign +1), lambda = 2 rho, and the simple pole alpha = 2 rho.
    pub fn principal(params: &ManifoldParams) -> Self {
        Self {
            p: 1,
            tau: "trivial".into(),
            lambda: None,
            real_singularities: vec![Singularity::real(params.two_rho_f64(), 1)],
        }
    }
}

/// Number of heights (k/c1)^(1/n) not exceeding `height`, i.e. floor(c1 height^n)
/// up to rounding in the last place.
pub fn weyl_count(c1: f64, n: u32, height: f64) -> u64 {
    let nf = f64::from(n);
    let h = |k: u64| (k as f64 / c1).powf(1.0 / nf);
    let tol = height * 1e-12;
    let mut count = (c1 * height.powi(n as i32)).floor().max(0.0) as u64;
    while h(count + 1) <= height + tol {
        count += 1;
    }
    while count > 0 && h(count) > height + tol {
        count -= 1;
    }
    count
}

/// Synthetic catalog whose critical heights are (k/c1)^(1/n), k = 1..floor(c1 height^n),
/// mirrored to negative heights, all of order 1.
pub fn weyl_sample(
    params: &ManifoldParams,
    c1: f64,
    height: f64,
    specs: &[WeylChannelSpec],
) -> Result<SingularityCatalog> {
    if !(c1 > 0.0) {
        return Err(Error::invalid("c1", format!("must be positive, got {c1}")));
    }
    if !(height > 0.0) {
        return Err(Error::invalid("height", format!("must be positive, got {height}")));
    }
    let rho = params.rho_f64();
    let nf = f64::from(params.n());
    let count = weyl_count(c1, params.n(), height);
    let heights: Vec<f64> = (1..=count).map(|k| (k as f64 / c1).powf(1.0 / nf)).collect();
    let channels = specs
        .iter()
        .map(|spec| {
            let critical = heights
                .iter()
                .flat_map(|&h| [Singularity::critical(rho, h, 1), Singularity::critical(rho, -h, 1)])
                .collect();
            Channel::new(
                spec.p,
                spec.tau.clone(),
                spec.lambda.unwrap_or(params.two_rho_f64()),
                spec.real_singularities.clone(),
                critical,
            )
        })
        .collect();
    Ok(SingularityCatalog::new(params.clone(), channels, c1))
}
