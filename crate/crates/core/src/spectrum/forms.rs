//! Indefinite binary quadratic forms a x^2 + b xy + c y^2 of positive
//! non-square discriminant, Gauss reduction cycles and narrow class numbers.

use std::collections::HashSet;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Gauss reduced: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
    /// All comparisons are done in integers (D is not a square).
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        let b = self.b;
        let two_a = 2 * self.a.abs();
        if b <= 0 || b * b >= d {
            return false;
        }
        let lower = (two_a + b) * (two_a + b) > d;
        let upper = two_a - b <= 0 || (two_a - b) * (two_a - b) < d;
        lower && upper
    }

    /// One step of the reduction operator: (a, b, c) -> (c, b', (b'^2 - D)/(4c))
    /// with b' = -b mod 2|c| and sqrt(D) - 2|c| < b' < sqrt(D). It permutes the
    /// reduced forms of a discriminant and is properly equivalent to the input.
    pub fn rho_step(&self) -> Form {
        let d = self.discriminant();
        let s = d.isqrt();
        let m = 2 * self.c.abs();
        let b_next = s - (s + self.b).rem_euclid(m);
        let c_next = (b_next * b_next - d) / (4 * self.c);
        Form::new(self.c, b_next, c_next)
    }
}

fn check_discriminant(d: i64) -> Result<()> {
    if d <= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::invalid(
            "discriminant",
            format!("{d} is not a positive discriminant (0 or 1 mod 4)"),
        ));
    }
    let s = d.isqrt();
    if s * s == d {
        return Err(Error::invalid("discriminant", format!("{d} is a perfect square")));
    }
    Ok(())
}

/// All reduced forms of discriminant `d`, primitive or not.
pub fn reduced_forms(d: i64) -> Result<Vec<Form>> {
    check_discriminant(d)?;
    let s = d.isqrt();
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        // a c = (b^2 - D)/4 = -m with m > 0
        let m = (d - b * b) / 4;
        let mut q = 1;
        while q * q <= m {
            if m % q == 0 {
                let r = m / q;
                for a in if q == r { vec![q] } else { vec![q, r] } {
                    let c = m / a;
                    for form in [Form::new(a, b, -c), Form::new(-a, b, c)] {
                        if form.is_reduced() {
                            out.push(form);
                        }
                    }
                }
            }
            q += 1;
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

/// Partitions reduced forms into cycles of the reduction operator.
/// Each cycle is one proper (SL2(Z)) equivalence class.
pub fn reduction_cycles(forms: &[Form]) -> Vec<Vec<Form>> {
    let mut seen: HashSet<Form> = HashSet::with_capacity(forms.len());
    let mut cycles = Vec::new();
    for &start in forms {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut f = start.rho_step();
        while f != start {
            debug_assert!(f.is_reduced(), "{f:?} left the reduced set");
            seen.insert(f);
            cycle.push(f);
            f = f.rho_step();
        }
        cycles.push(cycle);
    }
    cycles
}

/// Number of proper equivalence classes of primitive forms of discriminant `d`.
pub fn narrow_class_number(d: i64) -> Result<u64> {
    let forms: Vec<Form> = reduced_forms(d)?.into_iter().filter(Form::is_primitive).collect();
    Ok(reduction_cycles(&forms).len() as u64)
}
