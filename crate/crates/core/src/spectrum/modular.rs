//! Exact length spectrum of the modular surface PSL(2, Z) \ H.
//!
//! A hyperbolic class of trace t corresponds to the class of the form
//! c x^2 + (d - a) xy - b y^2 of discriminant t^2 - 4. Writing that form as
//! u times a primitive form of discriminant D' = (t^2 - 4)/u^2, the class is
//! primitive exactly when (t, u) is the fundamental solution of
//! x^2 - D' y^2 = 4. Hence the number of primitive classes of trace t is the
//! sum of narrow class numbers h+(D') over those u.

use rayon::prelude::*;

use super::forms::narrow_class_number;
use super::pell::pell4_fundamental;
use crate::error::{Error, Result};
use crate::model::{GeodesicRecord, LengthSpectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceClass {
    pub trace: i64,
    pub discriminant: i64,
    pub class_count: u64,
    pub eigenvalue: f64,
}

impl TraceClass {
    pub fn primitive_length(&self) -> f64 {
        primitive_length(self.trace)
    }

    pub fn primitive_norm(&self) -> f64 {
        self.eigenvalue * self.eigenvalue
    }
}

/// Length 2 arccosh(t/2) of the geodesic of a hyperbolic element with trace t.
pub fn primitive_length(trace: i64) -> f64 {
    2.0 * (trace as f64 / 2.0).acosh()
}

/// Largest eigenvalue (t + sqrt(t^2 - 4))/2.
pub fn eigenvalue(trace: i64) -> f64 {
    let t = trace as f64;
    (t + (t * t - 4.0).sqrt()) / 2.0
}

pub fn class_count_for_trace(t: i64) -> Result<u64> {
    if t < 3 {
        return Err(Error::NonHyperbolicTrace(t));
    }
    let disc = t * t - 4;
    let mut total = 0;
    for u in 1..=disc.isqrt() {
        if disc % (u * u) != 0 {
            continue;
        }
        let reduced = disc / (u * u);
        if reduced.rem_euclid(4) > 1 {
            continue;
        }
        if pell4_fundamental(reduced, u) == Some((t, u)) {
            total += narrow_class_number(reduced)?;
        }
    }
    Ok(total)
}

pub fn trace_class(t: i64) -> Result<TraceClass> {
    Ok(TraceClass {
        trace: t,
        discriminant: t * t - 4,
        class_count: class_count_for_trace(t)?,
        eigenvalue: eigenvalue(t),
    })
}

/// Largest hyperbolic trace whose primitive norm is <= `norm_bound`, if any.
pub fn max_trace(norm_bound: f64) -> Option<i64> {
    let log_bound = norm_bound.ln();
    let mut t = 3;
    if primitive_length(t) > log_bound {
        return None;
    }
    // eigenvalue ~ t, norm ~ t^2; step past the estimate then walk back.
    t = (norm_bound.sqrt() as i64 + 2).max(3);
    while primitive_length(t) > log_bound {
        t -= 1;
    }
    Some(t)
}

/// Primitive trace classes with norm <= `norm_bound`, computed in parallel.
pub fn trace_classes(norm_bound: f64) -> Result<Vec<TraceClass>> {
    let Some(t_max) = max_trace(norm_bound) else {
        return Ok(Vec::new());
    };
    (3..=t_max).into_par_iter().map(trace_class).collect()
}

pub fn enumerate_spectrum(norm_bound: f64) -> Result<LengthSpectrum> {
    if !(norm_bound > 1.0) {
        return Err(Error::invalid("norm_bound", format!("must exceed 1, got {norm_bound}")));
    }
    let log_bound = norm_bound.ln();
    let mut records = Vec::new();
    for class in trace_classes(norm_bound)? {
        if class.class_count == 0 {
            continue;
        }
        let weight = class.primitive_length();
        // trace of the k-th power: t_k = t t_(k-1) - t_(k-2), t_0 = 2
        let (mut prev, mut cur) = (2i64, class.trace);
        let mut k = 1u32;
        while weight * f64::from(k) <= log_bound + 1e-9 {
            let length = primitive_length(cur);
            let norm = length.exp();
            if norm > norm_bound {
                break;
            }
            records.push(GeodesicRecord {
                norm,
                length,
                weight,
                primitive: k == 1,
                multiplicity: class.class_count,
            });
            let Some(next) = cur.checked_mul(class.trace).and_then(|v| v.checked_sub(prev)) else {
                break;
            };
            (prev, cur) = (cur, next);
            k += 1;
        }
    }
    LengthSpectrum::new(records, norm_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_two_is_rejected() {
        assert_eq!(class_count_for_trace(2), Err(Error::NonHyperbolicTrace(2)));
        assert!(class_count_for_trace(-5).is_err());
    }

    #[test]
    fn small_bounds() {
        assert!(enumerate_spectrum(6.0).unwrap().is_empty());
        let s = enumerate_spectrum(7.0).unwrap();
        let h3 = class_count_for_trace(3).unwrap();
        assert_eq!(h3, 1);
        assert_eq!(s.records().iter().map(|r| r.multiplicity).sum::<u64>(), h3);
        let w = 2.0 * ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((s.records()[0].weight - w).abs() < 1e-14);
        assert!((w - 1.9248).abs() < 1e-4);
    }

    #[test]
    fn square_of_shortest_geodesic_appears() {
        let s = enumerate_spectrum(50.0).unwrap();
        let sq = s
            .records()
            .iter()
            .find(|r| !r.primitive)
            .expect("power record");
        let lam: f64 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((sq.norm - lam.powi(4)).abs() < 1e-10);
        assert!((sq.norm - 46.98).abs() < 0.01);
    }

    #[test]
    fn max_trace_boundary() {
        assert_eq!(max_trace(6.0), None);
        assert_eq!(max_trace(7.0), Some(3));
        let t = max_trace(1e6).unwrap();
        assert!(eigenvalue(t).powi(2) <= 1e6 && eigenvalue(t + 1).powi(2) > 1e6);
    }

    #[test]
    fn power_closure_and_growth() {
        let s = enumerate_spectrum(2e4).unwrap();
        for r in s.records().iter().filter(|r| r.primitive) {
            let mut k = 2;
            while (r.length * f64::from(k)).exp() <= s.norm_bound() {
                let target = r.length * f64::from(k);
                assert!(s
                    .records()
                    .iter()
                    .any(|p| !p.primitive && (p.length - target).abs() < 1e-9 && p.weight == r.weight));
                k += 1;
            }
        }
    }
}
