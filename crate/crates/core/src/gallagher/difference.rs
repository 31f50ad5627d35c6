use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// C(j, k) as a float; exact for the small orders used here.
pub fn binomial(j: u32, k: u32) -> f64 {
    if k > j {
        return 0.0;
    }
    let k = k.min(j - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(j - i) / f64::from(i + 1))
}

fn check_step(d: f64) -> Result<()> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::invalid("d", format!("step must be positive and finite, got {d}")));
    }
    Ok(())
}

/// sum_{k=0}^{j} (-1)^(j-k) C(j,k) f(x + k d).
pub fn forward_difference<F: Fn(f64) -> f64>(f: F, x: f64, d: f64, j: u32) -> Result<f64> {
    try_forward_difference(|t| Ok(f(t)), x, d, j)
}

/// [`forward_difference`] for fallible evaluators.
pub fn try_forward_difference<F>(f: F, x: f64, d: f64, j: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_step(d)?;
    let mut acc = NeumaierSum::new();
    for k in 0..=j {
        let sign = if (j - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc.add(sign * binomial(j, k) * f(x + f64::from(k) * d)?);
    }
    Ok(acc.value())
}

/// d^(-j) times the j-th forward difference (step d) of (t - N)_+^j / j!
/// at t = x, written in u = (x - N)/d. This is the distribution function of
/// the sum of j uniform variables on [0, 1], so it rises from 0 at u = -j to
/// 1 at u = 0.
pub fn bspline_cdf(u: f64, j: u32) -> f64 {
    if u >= 0.0 {
        return 1.0;
    }
    if u <= -f64::from(j) {
        return 0.0;
    }
    let fact: f64 = (1..=j).map(f64::from).product();
    let mut acc = NeumaierSum::new();
    for k in 0..=j {
        let t = u + f64::from(k);
        if t > 0.0 {
            let sign = if (j - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            acc.add(sign * binomial(j, k) * t.powi(j as i32));
        }
    }
    (acc.value() / fact).clamp(0.0, 1.0)
}
