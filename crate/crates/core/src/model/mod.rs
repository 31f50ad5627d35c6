//! Domain types shared by every module.

mod catalog;
mod geodesic;
mod params;
mod plan;
mod report;

pub use catalog::{
    channel_sign, validate_catalog, validate_catalog_with, Channel, Invariant, Singularity,
    SingularityCatalog, Theorem4Config, Violation, WeylEnvelope,
};
pub use geodesic::{GeodesicRecord, LengthSpectrum};
pub use params::{format_rational, parse_rational, rational, to_f64, Exponent, ManifoldParams};
pub use plan::{LogPowerExponents, PlanKind, SmoothingPlan};
pub use report::{ExceptionalReport, IntervalMeasure};
