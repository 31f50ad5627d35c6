//! Singularity catalogs: the spectral input of the explicit formulas.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use super::params::ManifoldParams;
use crate::error::{Error, Result};

/// A singularity s = alpha of the zeta function together with its signed order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub alpha: Complex64,
    pub order: i32,
}

impl Singularity {
    pub fn real(alpha: f64, order: i32) -> Self {
        Self {
            alpha: Complex64::new(alpha, 0.0),
            order,
        }
    }

    /// A singularity on the line Re s = rho at height `im`.
    pub fn critical(rho: f64, im: f64, order: i32) -> Self {
        Self {
            alpha: Complex64::new(rho, im),
            order,
        }
    }

    pub fn height(&self) -> f64 {
        self.alpha.im.abs()
    }
}

/// One (p, tau, lambda) summand of the explicit formula.
///
/// Critical singularities are kept sorted by (|Im alpha|, Im alpha), which is
/// the reduction order every evaluator uses; conjugate pairs end up adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    p: u32,
    tau: String,
    lambda: f64,
    sign: i8,
    real_singularities: Vec<Singularity>,
    critical_singularities: Vec<Singularity>,
}

impl Channel {
    /// Builds a channel with the sign (-1)^(p+1). No invariant is enforced
    /// here; see [`validate_catalog`].
    pub fn new(
        p: u32,
        tau: impl Into<String>,
        lambda: f64,
        real_singularities: Vec<Singularity>,
        mut critical_singularities: Vec<Singularity>,
    ) -> Self {
        critical_singularities.sort_by(|a, b| {
            a.height()
                .total_cmp(&b.height())
                .then(a.alpha.im.total_cmp(&b.alpha.im))
        });
        Self {
            p,
            tau: tau.into(),
            lambda,
            sign: channel_sign(p),
            real_singularities,
            critical_singularities,
        }
    }

    /// Overrides the channel sign.
    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = sign;
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn tau(&self) -> &str {
        &self.tau
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn real_singularities(&self) -> &[Singularity] {
        &self.real_singularities
    }

    pub fn critical_singularities(&self) -> &[Singularity] {
        &self.critical_singularities
    }

    /// Whether this channel carries the critical-line sum of the explicit
    /// formula for psi_j, which only runs over lambda = 2 rho.
    pub fn is_principal(&self, params: &ManifoldParams) -> bool {
        (self.lambda - params.two_rho_f64()).abs() <= 1e-12 * params.two_rho_f64().max(1.0)
    }

    /// Number of critical singularities (weighted by |order|) with 0 < Im alpha <= y.
    pub fn critical_count(&self, y: f64) -> u64 {
        self.critical_singularities
            .iter()
            .filter(|s| s.alpha.im > 0.0 && s.alpha.im <= y)
            .map(|s| u64::from(s.order.unsigned_abs()))
            .sum()
    }
}

/// (-1)^(p+1)
pub fn channel_sign(p: u32) -> i8 {
    if p.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityCatalog {
    pub params: ManifoldParams,
    pub channels: Vec<Channel>,
    pub weyl_constant: f64,
}

impl SingularityCatalog {
    pub fn new(params: ManifoldParams, channels: Vec<Channel>, weyl_constant: f64) -> Self {
        Self {
            params,
            channels,
            weyl_constant,
        }
    }

    /// Largest |Im alpha| over all critical singularities (0 if none).
    pub fn max_height(&self) -> f64 {
        self.channels
            .iter()
            .filter_map(|c| c.critical_singularities.last())
            .map(Singularity::height)
            .fold(0.0, f64::max)
    }

    pub fn principal_channels(&self) -> impl Iterator<Item = &Channel> {
        self.channels.iter().filter(|c| c.is_principal(&self.params))
    }

    /// Copy of the catalog with every channel sign negated.
    pub fn negated(&self) -> Self {
        let channels = self
            .channels
            .iter()
            .map(|c| c.clone().with_sign(-c.sign))
            .collect();
        Self::new(self.params.clone(), channels, self.weyl_constant)
    }
}

/// Allowed deviation |N(y) - C1 y^n| <= slack * (1 + y^(n-1)) of the critical
/// counting function from the Weyl law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylEnvelope {
    pub slack: f64,
}

impl Default for WeylEnvelope {
    fn default() -> Self {
        Self { slack: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    ChannelCount,
    WeylConstant,
    ChannelIndex,
    Sign,
    Order,
    RealAxis,
    CriticalLine,
    ConjugateClosure,
    WeylEnvelope,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::ChannelCount => "channel count",
            Invariant::WeylConstant => "weyl constant",
            Invariant::ChannelIndex => "channel index",
            Invariant::Sign => "sign",
            Invariant::Order => "order",
            Invariant::RealAxis => "real axis",
            Invariant::CriticalLine => "critical line",
            Invariant::ConjugateClosure => "conjugate closure",
            Invariant::WeylEnvelope => "weyl envelope",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Index into `catalog.channels`; `None` for catalog-level invariants.
    pub channel: Option<usize>,
    pub invariant: Invariant,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.channel {
            Some(c) => write!(f, "channel {c}: {}: {}", self.invariant, self.detail),
            None => write!(f, "catalog: {}: {}", self.invariant, self.detail),
        }
    }
}

pub fn validate_catalog(catalog: &SingularityCatalog) -> Vec<Violation> {
    validate_catalog_with(catalog, WeylEnvelope::default())
}

pub fn validate_catalog_with(catalog: &SingularityCatalog, envelope: WeylEnvelope) -> Vec<Violation> {
    let mut out = Vec::new();
    let params = &catalog.params;
    let rho = params.rho_f64();
    let two_rho = params.two_rho_f64();
    let n = params.n();

    if catalog.channels.is_empty() {
        out.push(Violation {
            channel: None,
            invariant: Invariant::ChannelCount,
            detail: "catalog has no channels".into(),
        });
    }
    if !(catalog.weyl_constant > 0.0 && catalog.weyl_constant.is_finite()) {
        out.push(Violation {
            channel: None,
            invariant: Invariant::WeylConstant,
            detail: format!("C1 = {} is not a positive real", catalog.weyl_constant),
        });
    }

    for (idx, ch) in catalog.channels.iter().enumerate() {
        let mut push = |invariant, detail: String| {
            out.push(Violation {
                channel: Some(idx),
                invariant,
                detail,
            })
        };
        if ch.p >= n {
            push(Invariant::ChannelIndex, format!("p = {} outside [0, {}]", ch.p, n - 1));
        }
        if ch.sign != channel_sign(ch.p) {
            push(
                Invariant::Sign,
                format!("sign {} differs from (-1)^(p+1) = {}", ch.sign, channel_sign(ch.p)),
            );
        }
        let zero_order = ch
            .real_singularities
            .iter()
            .chain(&ch.critical_singularities)
            .filter(|s| s.order == 0)
            .count();
        if zero_order > 0 {
            push(Invariant::Order, format!("{zero_order} singularity(ies) of order 0"));
        }
        let off_axis: Vec<_> = ch
            .real_singularities
            .iter()
            .filter(|s| s.alpha.im != 0.0 || s.alpha.re > two_rho)
            .collect();
        if let Some(first) = off_axis.first() {
            push(
                Invariant::RealAxis,
                format!(
                    "{} real singularity(ies) not in (-inf, 2 rho = {two_rho}], first {}",
                    off_axis.len(),
                    first.alpha
                ),
            );
        }
        let off_line: Vec<_> = ch
            .critical_singularities
            .iter()
            .filter(|s| s.alpha.re != rho)
            .collect();
        if let Some(first) = off_line.first() {
            push(
                Invariant::CriticalLine,
                format!(
                    "{} singularity(ies) off Re s = rho = {rho}, first {}",
                    off_line.len(),
                    first.alpha
                ),
            );
        }
        if let Some(detail) = conjugate_mismatch(&ch.critical_singularities) {
            push(Invariant::ConjugateClosure, detail);
        }
        if let Some(detail) = weyl_excursion(ch, catalog.weyl_constant, n, envelope) {
            push(Invariant::WeylEnvelope, detail);
        }
    }
    out
}

fn conjugate_mismatch(critical: &[Singularity]) -> Option<String> {
    let key = |s: &Singularity| (s.alpha.re.to_bits(), s.alpha.im.abs().to_bits());
    let mut balance: HashMap<(u64, u64), (i64, i64, f64)> = HashMap::new();
    for s in critical {
        if s.alpha.im == 0.0 {
            continue;
        }
        let e = balance.entry(key(s)).or_insert((0, 0, s.alpha.im.abs()));
        if s.alpha.im > 0.0 {
            e.0 += i64::from(s.order);
        } else {
            e.1 += i64::from(s.order);
        }
    }
    let mut bad: Vec<f64> = balance
        .values()
        .filter(|(up, down, _)| up != down)
        .map(|&(_, _, h)| h)
        .collect();
    if bad.is_empty() {
        return None;
    }
    bad.sort_by(f64::total_cmp);
    Some(format!(
        "{} height(s) without a matching conjugate, first at |Im alpha| = {}",
        bad.len(),
        bad[0]
    ))
}

fn weyl_excursion(ch: &Channel, c1: f64, n: u32, envelope: WeylEnvelope) -> Option<String> {
    let mut heights: Vec<(f64, u64)> = ch
        .critical_singularities
        .iter()
        .filter(|s| s.alpha.im > 0.0)
        .map(|s| (s.alpha.im, u64::from(s.order.unsigned_abs())))
        .collect();
    if heights.is_empty() || !(c1 > 0.0) {
        return None;
    }
    heights.sort_by(|a, b| a.0.total_cmp(&b.0));
    let exponent = n as i32;
    let allowed = |y: f64| envelope.slack * (1.0 + y.powi(exponent - 1));
    // The count jumps at each height: check just below (previous value) and at it.
    let mut count = 0u64;
    let mut i = 0;
    while i < heights.len() {
        let y = heights[i].0;
        let weyl = c1 * y.powi(exponent);
        if (count as f64 - weyl).abs() > allowed(y) {
            return Some(format!("N({y}-) = {count} vs C1 y^n = {weyl}"));
        }
        while i < heights.len() && heights[i].0 == y {
            count += heights[i].1;
            i += 1;
        }
        if (count as f64 - weyl).abs() > allowed(y) {
            return Some(format!("N({y}) = {count} vs C1 y^n = {weyl}"));
        }
    }
    None
}

/// Inputs of the conditional explicit formula for psi_{n-1}.
///
/// `poly_log_coeffs[k]` multiplies x^(n-1-k) log x and `poly_coeffs[k]`
/// multiplies x^(n-1-k), for k = 0..n-1.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem4Config {
    pub poly_log_coeffs: Vec<f64>,
    pub poly_coeffs: Vec<f64>,
    pub truncation_height: f64,
    pub epsilon1: f64,
    pub delta: f64,
}

impl Theorem4Config {
    /// All polynomial coefficients zero.
    pub fn zero(n: u32, truncation_height: f64, epsilon1: f64, delta: f64) -> Self {
        Self {
            poly_log_coeffs: vec![0.0; n as usize],
            poly_coeffs: vec![0.0; n as usize],
            truncation_height,
            epsilon1,
            delta,
        }
    }

    pub fn validate(&self, n: u32) -> Result<()> {
        let n = n as usize;
        if self.poly_log_coeffs.len() != n || self.poly_coeffs.len() != n {
            return Err(Error::invalid(
                "theorem4 coefficients",
                format!(
                    "expected {n} coefficients each, got {} and {}",
                    self.poly_log_coeffs.len(),
                    self.poly_coeffs.len()
                ),
            ));
        }
        if !(self.truncation_height > 0.0) {
            return Err(Error::invalid("truncation_height", "must be positive"));
        }
        if !(self.epsilon1 > 0.0) {
            return Err(Error::invalid("epsilon1", "must be positive"));
        }
        if !(self.delta > 0.0) {
            return Err(Error::invalid("delta", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl_channel(params: &ManifoldParams, c1: f64, count: u32) -> Channel {
        let rho = params.rho_f64();
        let n = f64::from(params.n());
        let mut crit = Vec::new();
        for k in 1..=count {
            let h = (f64::from(k) / c1).powf(1.0 / n);
            crit.push(Singularity::critical(rho, h, 1));
            crit.push(Singularity::critical(rho, -h, 1));
        }
        Channel::new(1, "trivial", params.two_rho_f64(), vec![Singularity::real(1.0, 1)], crit)
    }

    #[test]
    fn single_p0_channel_is_valid() {
        let params = ManifoldParams::modular_surface();
        let ch = Channel::new(0, "t", 1.0, vec![Singularity::real(1.0, 1)], vec![]);
        assert_eq!(ch.sign(), -1);
        let cat = SingularityCatalog::new(params, vec![ch], 1.0);
        assert!(validate_catalog(&cat).is_empty());
    }

    #[test]
    fn off_line_critical_singularity_is_reported() {
        let params = ManifoldParams::modular_surface();
        let crit = vec![Singularity::critical(0.6, 1.0, 1), Singularity::critical(0.6, -1.0, 1)];
        let ch = Channel::new(1, "t", 1.0, vec![], crit);
        let cat = SingularityCatalog::new(params, vec![ch], 1.0);
        let v = validate_catalog(&cat);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].invariant.name(), "critical line");
        assert_eq!(v[0].channel, Some(0));
    }

    #[test]
    fn weyl_heights_satisfy_envelope() {
        // Exhaustive count: heights (k/C1)^(1/n) give N(y) = floor(C1 y^n).
        for (n, c1) in [(2u32, 1.0), (2, 2.5), (3, 0.7)] {
            let params = ManifoldParams::real_hyperbolic(n).unwrap();
            let ch = weyl_channel(&params, c1, 400);
            for y in [1.0, 2.5, 5.0, 7.25] {
                let brute = (1..=400u32)
                    .filter(|&k| (f64::from(k) / c1).powf(1.0 / f64::from(n)) <= y)
                    .count() as u64;
                assert_eq!(ch.critical_count(y), brute);
            }
            let cat = SingularityCatalog::new(params, vec![ch], c1);
            assert!(validate_catalog(&cat).is_empty());
        }
    }

    #[test]
    fn detects_sign_order_and_conjugate_defects() {
        let params = ManifoldParams::modular_surface();
        let bad = Channel::new(
            0,
            "t",
            1.0,
            vec![Singularity::real(1.5, 1), Singularity::real(0.5, 0)],
            vec![Singularity::critical(0.5, 3.0, 1)],
        )
        .with_sign(1);
        let cat = SingularityCatalog::new(params, vec![bad], 1.0);
        let kinds: Vec<_> = validate_catalog(&cat).iter().map(|v| v.invariant).collect();
        for k in [Invariant::Sign, Invariant::Order, Invariant::RealAxis, Invariant::ConjugateClosure] {
            assert!(kinds.contains(&k), "missing {k}: {kinds:?}");
        }
    }

    #[test]
    fn crowded_channel_breaks_weyl_envelope() {
        let params = ManifoldParams::modular_surface();
        let crit: Vec<_> = (0..50)
            .flat_map(|_| [Singularity::critical(0.5, 1.0, 1), Singularity::critical(0.5, -1.0, 1)])
            .collect();
        let cat = SingularityCatalog::new(params, vec![Channel::new(1, "t", 1.0, vec![], crit)], 1.0);
        let v = validate_catalog(&cat);
        assert!(v.iter().any(|v| v.invariant == Invariant::WeylEnvelope));
        assert!(v.iter().all(|v| v.invariant != Invariant::ConjugateClosure));
    }

    #[test]
    fn empty_catalog_and_bad_constant() {
        let cat = SingularityCatalog::new(ManifoldParams::modular_surface(), vec![], -1.0);
        let v = validate_catalog(&cat);
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|v| v.channel.is_none()));
    }

    #[test]
    fn theorem4_config_shape() {
        assert!(Theorem4Config::zero(3, 10.0, 0.1, 0.1).validate(3).is_ok());
        assert!(Theorem4Config::zero(3, 10.0, 0.1, 0.1).validate(2).is_err());
        assert!(Theorem4Config::zero(2, 0.0, 0.1, 0.1).validate(2).is_err());
    }
}
