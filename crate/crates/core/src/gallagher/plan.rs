use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::model::{rational, Exponent, LogPowerExponents, ManifoldParams, PlanKind, SmoothingPlan};

pub const DEFAULT_EPSILON: f64 = 0.01;

/// Solves the balancing system for (gamma, beta) and derives d and Y.
///
/// With m = 2j + 3 - 2n and a = n - 1 the system reads
///
/// ```text
/// (gamma - 2 rho + 1)/(j + 1) = 1 - rho + a (2 rho + 2j - 2 gamma)/m
/// beta/(j + 1)                = a (1 - 2 beta)/m
/// ```
///
/// The left-hand sides are the x and log x exponents of d, the parenthesised
/// quotients on the right those of Y.
pub fn solve_plan(params: &ManifoldParams, j: u32, epsilon: f64) -> Result<SmoothingPlan> {
    solve_plan_with(params, j, epsilon, 1.0)
}

pub fn solve_plan_with(
    params: &ManifoldParams,
    j: u32,
    epsilon: f64,
    y_constant: f64,
) -> Result<SmoothingPlan> {
    let n = params.n();
    if j == 0 || j + 1 < n {
        return Err(Error::invalid(
            "j",
            format!("smoothing order {j} outside the supported range j >= max(1, n - 1) = {}", (n - 1).max(1)),
        ));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", format!("must be positive, got {epsilon}")));
    }
    if !(y_constant > 0.0) {
        return Err(Error::invalid("y_constant", format!("must be positive, got {y_constant}")));
    }
    let rho = *params.rho();
    let one = rational(1, 1);
    let two = rational(2, 1);
    let jr = rational(i128::from(j), 1);
    let a = params.n_rational() - one;
    let m = two * jr + rational(3, 1) - two * params.n_rational();
    let jp1 = jr + one;

    // gamma (1/(j+1) + 2a/m) = 1 - rho + a (2 rho + 2j)/m + (2 rho - 1)/(j+1)
    let coeff = one / jp1 + two * a / m;
    let gamma = (one - rho + a * (two * rho + two * jr) / m + (two * rho - one) / jp1) / coeff;
    // beta (1/(j+1) + 2a/m) = a/m
    let beta = (a / m) / coeff;

    let d_x = (gamma - two * rho + one) / jp1;
    let d_log = beta / jp1;
    let y_x = (two * rho + two * jr - two * gamma) / m;
    let y_log = (one - two * beta) / m;

    let kind = if j + 1 == n { PlanKind::Conditional } else { PlanKind::Unconditional };
    Ok(SmoothingPlan {
        j,
        epsilon,
        gamma_exp: gamma,
        beta,
        d_exponents: LogPowerExponents::new(d_x, d_log, d_log),
        y_exponents: LogPowerExponents::new(y_x, y_log, y_log),
        error_x_exponent: two * rho - one + d_x,
        error_log_exponent: d_log,
        kind,
        y_constant,
    })
}

/// psi_0 error exponents 2 rho - rho (2j + 1)/(2nj + 1) for each j.
pub fn exponent_sequence(params: &ManifoldParams, js: RangeInclusive<u32>) -> Result<Vec<Exponent>> {
    js.map(|j| solve_plan(params, j, DEFAULT_EPSILON).map(|p| p.error_x_exponent))
        .collect()
}

/// 2 rho - rho/n, the limit of the exponent sequence.
pub fn limit_exponent(params: &ManifoldParams) -> Exponent {
    params.two_rho() - *params.rho() / params.n_rational()
}

/// Error exponent of the unconditional pipeline; the same value as
/// [`limit_exponent`], for every admissible j.
pub fn unconditional_exponent(params: &ManifoldParams, j: u32) -> Result<Exponent> {
    let n = params.n();
    if j < n {
        return Err(Error::OrderTooSmall { j, min: n });
    }
    Ok(limit_exponent(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_and_three_manifold() {
        let p = solve_plan(&ManifoldParams::modular_surface(), 1, 0.01).unwrap();
        assert_eq!(p.error_x_exponent, rational(7, 10));
        assert_eq!(p.error_log_exponent, rational(1, 5));
        let q = solve_plan(&ManifoldParams::real_hyperbolic(3).unwrap(), 2, 0.01).unwrap();
        assert_eq!(q.error_x_exponent, rational(21, 13));
        assert_eq!(q.error_log_exponent, rational(2, 13));
        let r = solve_plan(&ManifoldParams::modular_surface(), 4, 0.01).unwrap();
        assert_eq!(r.error_x_exponent, rational(25, 34));
    }

    #[test]
    fn sequence_values() {
        let s = exponent_sequence(&ManifoldParams::modular_surface(), 1..=3).unwrap();
        assert_eq!(s, vec![rational(7, 10), rational(13, 18), rational(19, 26)]);
    }

    #[test]
    fn range_checks() {
        let p = ManifoldParams::real_hyperbolic(4).unwrap();
        assert!(solve_plan(&p, 2, 0.01).is_err());
        assert_eq!(solve_plan(&p, 3, 0.01).unwrap().kind, PlanKind::Conditional);
        assert_eq!(solve_plan(&p, 4, 0.01).unwrap().kind, PlanKind::Unconditional);
        assert!(solve_plan(&ManifoldParams::modular_surface(), 0, 0.01).is_err());
        assert!(solve_plan(&ManifoldParams::modular_surface(), 1, 0.0).is_err());
    }

    #[test]
    fn unconditional_values() {
        let half = ManifoldParams::modular_surface();
        assert_eq!(unconditional_exponent(&half, 2).unwrap(), rational(3, 4));
        let three = ManifoldParams::real_hyperbolic(3).unwrap();
        assert_eq!(unconditional_exponent(&three, 3).unwrap(), rational(5, 3));
        assert_eq!(unconditional_exponent(&three, 6).unwrap(), rational(5, 3));
        assert!(unconditional_exponent(&three, 2).is_err());
    }
}
