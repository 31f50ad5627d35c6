//! Spectrum CSV and catalog/config JSON.
//!
//! Spectrum files carry their completeness bound in a leading
//! `# norm_bound=...` line; other `#` lines (manifests) are ignored on read.

use std::io::{BufRead, Write};

use anyhow::{bail, Context};
use num_complex::Complex64;
use pgt_core::model::{
    format_rational, parse_rational, validate_catalog, Channel, GeodesicRecord, LengthSpectrum,
    ManifoldParams, Singularity, SingularityCatalog, Theorem4Config,
};
use serde::{Deserialize, Serialize};

/// A catalog that failed validation; maps to the validation exit code.
#[derive(Debug)]
pub struct InvalidCatalog(pub Vec<String>);

impl std::fmt::Display for InvalidCatalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "catalog failed validation:")?;
        for v in &self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InvalidCatalog {}

const SPECTRUM_HEADER: &str = "# norm_bound=";

pub fn write_spectrum<W: Write>(spectrum: &LengthSpectrum, mut out: W) -> anyhow::Result<()> {
    writeln!(out, "{SPECTRUM_HEADER}{}", spectrum.norm_bound())?;
    let mut w = csv::Writer::from_writer(out);
    for r in spectrum.records() {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_spectrum<R: BufRead>(input: R) -> anyhow::Result<LengthSpectrum> {
    let mut bound = None;
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        if let Some(v) = line.strip_prefix(SPECTRUM_HEADER) {
            bound = Some(v.trim().parse::<f64>().context("norm_bound")?);
        } else if !line.starts_with('#') {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let Some(bound) = bound else {
        bail!("spectrum file has no `{SPECTRUM_HEADER}` line");
    };
    let records = csv::Reader::from_reader(body.as_bytes())
        .deserialize()
        .collect::<Result<Vec<GeodesicRecord>, _>>()
        .context("spectrum records")?;
    Ok(LengthSpectrum::new(records, bound)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealEntry {
    pub alpha: f64,
    pub order: i32,
}

/// A critical-line singularity rho + i im.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalEntry {
    pub im: f64,
    pub order: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub p: u32,
    pub tau: String,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default)]
    pub real: Vec<RealEntry>,
    #[serde(default)]
    pub critical: Vec<CriticalEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub n: u32,
    /// Exact rational "p/q".
    pub rho: String,
    pub weyl_constant: f64,
    pub channels: Vec<ChannelFile>,
}

impl CatalogFile {
    pub fn from_catalog(cat: &SingularityCatalog) -> Self {
        let channels = cat
            .channels
            .iter()
            .map(|ch| ChannelFile {
                p: ch.p(),
                tau: ch.tau().to_string(),
                lambda: ch.lambda(),
                sign: (ch.sign() != pgt_core::model::channel_sign(ch.p())).then_some(ch.sign()),
                real: ch
                    .real_singularities()
                    .iter()
                    .map(|s| RealEntry { alpha: s.alpha.re, order: s.order })
                    .collect(),
                critical: ch
                    .critical_singularities()
                    .iter()
                    .map(|s| CriticalEntry { im: s.alpha.im, order: s.order })
                    .collect(),
            })
            .collect();
        Self {
            n: cat.params.n(),
            rho: format_rational(cat.params.rho()),
            weyl_constant: cat.weyl_constant,
            channels,
        }
    }

    pub fn into_catalog(self) -> anyhow::Result<SingularityCatalog> {
        let params = ManifoldParams::new(self.n, parse_rational(&self.rho)?)?;
        let rho = params.rho_f64();
        let channels = self
            .channels
            .into_iter()
            .map(|c| {
                let real = c.real.iter().map(|r| Singularity::real(r.alpha, r.order)).collect();
                let critical = c
                    .critical
                    .iter()
                    .map(|e| Singularity { alpha: Complex64::new(rho, e.im), order: e.order })
                    .collect();
                let ch = Channel::new(c.p, c.tau, c.lambda, real, critical);
                match c.sign {
                    Some(s) => ch.with_sign(s),
                    None => ch,
                }
            })
            .collect();
        Ok(SingularityCatalog::new(params, channels, self.weyl_constant))
    }
}

pub fn write_catalog<W: Write>(cat: &SingularityCatalog, out: W) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(out, &CatalogFile::from_catalog(cat))?;
    Ok(())
}

/// Reads a catalog without validating it.
pub fn read_catalog_unchecked<R: std::io::Read>(input: R) -> anyhow::Result<SingularityCatalog> {
    let file: CatalogFile = serde_json::from_reader(input).context("catalog JSON")?;
    file.into_catalog()
}

/// Reads a catalog and rejects it with [`InvalidCatalog`] if any invariant fails.
pub fn read_catalog<R: std::io::Read>(input: R) -> anyhow::Result<SingularityCatalog> {
    let cat = read_catalog_unchecked(input)?;
    let violations = validate_catalog(&cat);
    if !violations.is_empty() {
        return Err(InvalidCatalog(violations.iter().map(ToString::to_string).collect()).into());
    }
    Ok(cat)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem4File {
    #[serde(default)]
    pub poly_log_coeffs: Option<Vec<f64>>,
    #[serde(default)]
    pub poly_coeffs: Option<Vec<f64>>,
    pub truncation_height: f64,
    pub epsilon1: f64,
    pub delta: f64,
}

impl Theorem4File {
    /// Missing coefficient lists default to zeros.
    pub fn into_config(self, n: u32) -> Theorem4Config {
        let zeros = vec![0.0; n as usize];
        Theorem4Config {
            poly_log_coeffs: self.poly_log_coeffs.unwrap_or_else(|| zeros.clone()),
            poly_coeffs: self.poly_coeffs.unwrap_or(zeros),
            truncation_height: self.truncation_height,
            epsilon1: self.epsilon1,
            delta: self.delta,
        }
    }
}

pub fn read_theorem4<R: std::io::Read>(input: R, n: u32) -> anyhow::Result<Theorem4Config> {
    let file: Theorem4File = serde_json::from_reader(input).context("theorem-4 config JSON")?;
    Ok(file.into_config(n))
}
