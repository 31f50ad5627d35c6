use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

/// Geometric grid x_k = x0 r^k, k = 0..count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(x0: f64, ratio: f64, count: usize) -> anyhow::Result<Self> {
        if !(x0 > 0.0 && x0.is_finite()) {
            bail!("grid start must be a positive number, got {x0}");
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            bail!("grid ratio must exceed 1, got {ratio}");
        }
        Ok(Self { x0, ratio, count })
    }

    /// A grid spanning [lo, hi] with `per_decade` points per factor of ten.
    pub fn spanning(lo: f64, hi: f64, per_decade: usize) -> anyhow::Result<Self> {
        let ratio = 10f64.powf(1.0 / per_decade as f64);
        let count = ((hi / lo).log10() * per_decade as f64).floor() as usize + 1;
        Self::new(lo, ratio, count)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.x0 * self.ratio.powi(k as i32)).collect()
    }

    pub fn max(&self) -> Option<f64> {
        self.count.checked_sub(1).map(|k| self.x0 * self.ratio.powi(k as i32))
    }
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [x0, r, count] = parts[..] else {
            bail!("grid must look like x0:r:count, got {s:?}");
        };
        Self::new(
            x0.trim().parse().context("grid x0")?,
            r.trim().parse().context("grid ratio")?,
            count.trim().parse().context("grid count")?,
        )
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.x0, self.ratio, self.count)
    }
}
