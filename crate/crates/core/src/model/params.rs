use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Exact rational used for every exponent and for the root half-sum.
pub type Exponent = Ratio<i128>;

pub fn rational(numer: i128, denom: i128) -> Exponent {
    Ratio::new(numer, denom)
}

pub fn to_f64(q: &Exponent) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `p/q`, including integers (`2/1`).
pub fn format_rational(q: &Exponent) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Exponent> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p = i128::from_str(p.trim()).ok();
            let q = i128::from_str(q.trim()).ok();
            match (p, q) {
                (Some(p), Some(q)) if q != 0 => Some(Ratio::new(p, q)),
                _ => None,
            }
        }
        None => i128::from_str(s).ok().map(Ratio::from_integer),
    };
    parsed.ok_or_else(|| Error::invalid("rational", format!("cannot parse `{s}` as p/q")))
}

/// The pair (n, rho): manifold dimension and half-sum of the positive roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ManifoldParams {
    n: u32,
    rho: Exponent,
}

impl ManifoldParams {
    pub fn new(n: u32, rho: Exponent) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", format!("dimension must be >= 2, got {n}")));
        }
        if !rho.is_positive() {
            return Err(Error::invalid("rho", format!("must be positive, got {rho}")));
        }
        Ok(Self { n, rho })
    }

    /// Real hyperbolic n-space quotient: rho = (n - 1)/2.
    pub fn real_hyperbolic(n: u32) -> Result<Self> {
        Self::new(n, rational(i128::from(n) - 1, 2))
    }

    /// The modular surface testbed (n = 2, rho = 1/2).
    pub fn modular_surface() -> Self {
        Self {
            n: 2,
            rho: rational(1, 2),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rho(&self) -> &Exponent {
        &self.rho
    }

    pub fn rho_f64(&self) -> f64 {
        to_f64(&self.rho)
    }

    /// 2 rho, the main-term exponent.
    pub fn two_rho(&self) -> Exponent {
        self.rho * 2
    }

    pub fn two_rho_f64(&self) -> f64 {
        to_f64(&self.two_rho())
    }

    pub fn n_rational(&self) -> Exponent {
        Exponent::from_integer(i128::from(self.n))
    }

    /// Whether rho matches the real-hyperbolic value (n - 1)/2.
    pub fn is_real_hyperbolic(&self) -> bool {
        self.rho * 2 + Exponent::one() == self.n_rational()
    }
}

impl fmt::Display for ManifoldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n = {}, rho = {}", self.n, format_rational(&self.rho))
    }
}
