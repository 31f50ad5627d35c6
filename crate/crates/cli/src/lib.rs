//! File formats, grids, run manifests and the comparison/regression
//! experiments behind the `pgt` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod fit;
pub mod grid;
pub mod io;
pub mod manifest;
