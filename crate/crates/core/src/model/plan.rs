use std::fmt;

use super::params::Exponent;

/// Which explicit formula a plan descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    /// j >= n: unconditional explicit formula for psi_j.
    Unconditional,
    /// j = n - 1: relies on the conditional formula for psi_{n-1}.
    Conditional,
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanKind::Unconditional => f.write_str("unconditional"),
            PlanKind::Conditional => f.write_str("conditional (psi_{n-1})"),
        }
    }
}

/// Exponents of x, log x and log log x in a factor x^a (log x)^b (log log x)^c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogPowerExponents {
    pub x: Exponent,
    pub log: Exponent,
    pub log_log: Exponent,
}

impl LogPowerExponents {
    pub fn new(x: Exponent, log: Exponent, log_log: Exponent) -> Self {
        Self { x, log, log_log }
    }

    /// x^a (log x)^b (log log x)^c, for x > e.
    pub fn eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        let llx = lx.ln();
        x.powf(super::to_f64(&self.x))
            * lx.powf(super::to_f64(&self.log))
            * llx.powf(super::to_f64(&self.log_log))
    }
}

/// Solved smoothing parameters for the descent from psi_j to psi_0.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingPlan {
    pub j: u32,
    pub epsilon: f64,
    pub gamma_exp: Exponent,
    pub beta: Exponent,
    /// d = x^a (log x)^b (log log x)^c
    pub d_exponents: LogPowerExponents,
    /// Y ~ x^a (log x)^b (log log x)^c
    pub y_exponents: LogPowerExponents,
    /// Exponents of x and log x in the psi_0 error term.
    pub error_x_exponent: Exponent,
    pub error_log_exponent: Exponent,
    pub kind: PlanKind,
    /// Proportionality constant in Y ~ ...
    pub y_constant: f64,
}

impl SmoothingPlan {
    pub fn step(&self, x: f64) -> f64 {
        self.d_exponents.eval(x)
    }

    pub fn split_height(&self, x: f64) -> f64 {
        self.y_constant * self.y_exponents.eval(x)
    }
}
