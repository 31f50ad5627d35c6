//! Numerical laboratory for prime geodesic theorems: exact length spectra,
//! Chebyshev counting functions, explicit formulas over singularity
//! catalogs, and the Gallagher smoothing pipeline with exceptional-set
//! accounting.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod error;
pub mod explicit;
pub mod gallagher;
pub mod li;
pub mod model;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod spectrum;
pub mod sum;

pub use error::{Error, Result};
