use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// A (class of) closed geodesic(s) sharing one norm.
///
/// `weight` is Lambda(gamma) = log N(gamma_0), the length of the underlying
/// primitive geodesic; `multiplicity` counts the conjugacy classes carried
/// by this record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicRecord {
    pub norm: f64,
    pub length: f64,
    pub weight: f64,
    pub primitive: bool,
    pub multiplicity: u64,
}

impl GeodesicRecord {
    /// The `power`-th power of a primitive geodesic of length `primitive_length`.
    pub fn power_of(primitive_length: f64, power: u32, multiplicity: u64) -> Self {
        let length = primitive_length * f64::from(power);
        Self {
            norm: length.exp(),
            length,
            weight: primitive_length,
            primitive: power == 1,
            multiplicity,
        }
    }

    /// Checks the record-level invariants; returns a description of the first failure.
    pub fn check(&self) -> std::result::Result<(), String> {
        if !(self.norm > 1.0) || !(self.length > 0.0) || !(self.weight > 0.0) {
            return Err(format!("non-positive norm/length/weight in {self:?}"));
        }
        if self.multiplicity == 0 {
            return Err("zero multiplicity".into());
        }
        if ((self.length.exp() - self.norm) / self.norm).abs() > 1e-9 {
            return Err(format!("norm {} != exp(length {})", self.norm, self.length));
        }
        let ratio = self.length / self.weight;
        let k = ratio.round();
        if (ratio - k).abs() > 1e-9 {
            return Err(format!("length {} is not a multiple of weight {}", self.length, self.weight));
        }
        match (self.primitive, k as i64) {
            (true, 1) => Ok(()),
            (false, p) if p >= 2 => Ok(()),
            _ => Err(format!("primitive flag {} inconsistent with power {k}", self.primitive)),
        }
    }
}

/// All geodesics with norm <= `norm_bound`, sorted by norm.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    records: Vec<GeodesicRecord>,
    norm_bound: f64,
    /// cumulative[i] = sum of weight * multiplicity over records[..=i]
    cumulative: Vec<f64>,
}

impl LengthSpectrum {
    pub fn new(mut records: Vec<GeodesicRecord>, norm_bound: f64) -> Result<Self> {
        if !(norm_bound > 1.0) {
            return Err(Error::invalid("norm_bound", format!("must exceed 1, got {norm_bound}")));
        }
        if let Some(r) = records.iter().find(|r| r.norm > norm_bound) {
            return Err(Error::invalid(
                "records",
                format!("record with norm {} beyond bound {norm_bound}", r.norm),
            ));
        }
        for r in &records {
            r.check().map_err(|e| Error::invalid("records", e))?;
        }
        records.sort_by(|a, b| {
            a.norm
                .total_cmp(&b.norm)
                .then(b.primitive.cmp(&a.primitive))
                .then(a.weight.total_cmp(&b.weight))
        });
        let mut acc = NeumaierSum::new();
        let cumulative = records
            .iter()
            .map(|r| {
                acc.add(r.weight * r.multiplicity as f64);
                acc.value()
            })
            .collect();
        Ok(Self {
            records,
            norm_bound,
            cumulative,
        })
    }

    pub fn empty(norm_bound: f64) -> Result<Self> {
        Self::new(Vec::new(), norm_bound)
    }

    pub fn records(&self) -> &[GeodesicRecord] {
        &self.records
    }

    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of records with norm <= x (inclusive).
    pub fn count_upto(&self, x: f64) -> usize {
        self.records.partition_point(|r| r.norm <= x)
    }

    /// Sum of weight * multiplicity over records with norm <= x.
    pub fn cumulative_weight(&self, x: f64) -> f64 {
        match self.count_upto(x) {
            0 => 0.0,
            k => self.cumulative[k - 1],
        }
    }

    pub fn ensure_covers(&self, x: f64) -> Result<()> {
        if x > self.norm_bound {
            Err(Error::IncompleteData {
                x,
                bound: self.norm_bound,
            })
        } else {
            Ok(())
        }
    }

    /// Restriction to norms <= `bound`.
    pub fn truncated(&self, bound: f64) -> Result<Self> {
        let k = self.count_upto(bound);
        Self::new(self.records[..k].to_vec(), bound.min(self.norm_bound))
    }
}
