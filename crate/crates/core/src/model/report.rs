use serde::{Deserialize, Serialize};

/// Logarithmic measure of the exceedance set inside [e^i, e^(i+1)].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalMeasure {
    pub i: i64,
    pub exceed_measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub intervals: Vec<IntervalMeasure>,
    pub total_measure: f64,
    /// The epsilon of the log log x factor in the threshold.
    pub epsilon: f64,
}

impl ExceptionalReport {
    pub fn new(intervals: Vec<IntervalMeasure>, epsilon: f64) -> Self {
        let total_measure = intervals.iter().map(|m| m.exceed_measure).sum();
        Self {
            intervals,
            total_measure,
            epsilon,
        }
    }
}
