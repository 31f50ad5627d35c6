//! Smoothing descent from psi_j to psi_0: the forward difference operator,
//! the solved exponent system, exceptional-set accounting and the
//! unconditional pipeline.

mod difference;
mod exceptional;
mod pipeline;
mod plan;

pub use difference::{binomial, bspline_cdf, forward_difference, try_forward_difference};
pub use exceptional::{
    converge_check, critical_remainder, exceptional_report, gallagher_integral, threshold,
    ConvergeResult, Level, DEFAULT_GRID_DENSITY,
};
pub use pipeline::{
    smooth_psi0_estimate, smooth_psi0_spectrum, unconditional_psi0, PsiSource,
    UnconditionalEstimate,
};
pub use plan::{
    exponent_sequence, limit_exponent, solve_plan, solve_plan_with, unconditional_exponent,
    DEFAULT_EPSILON,
};
