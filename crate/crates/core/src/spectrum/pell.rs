//! Fundamental solutions of x^2 - D y^2 = 4 via the continued fraction of
//! (sigma + sqrt D)/2, sigma = D mod 2.

use num_integer::Integer;

/// Smallest solution (x, y), x, y > 0, of x^2 - D y^2 = 4, searching only
/// convergents with y <= `y_limit`. Returns `None` if the fundamental
/// solution has y > `y_limit`.
pub fn pell4_fundamental(d: i64, y_limit: i64) -> Option<(i64, i64)> {
    let s = d.isqrt();
    if d <= 0 || s * s == d || d.rem_euclid(4) > 1 {
        return None;
    }
    let d = i128::from(d);
    let s = i128::from(s);
    let sigma = d % 2;
    // complete quotient (P + sqrt D)/Q
    let (mut p, mut q) = (sigma, 2i128);
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    loop {
        let a = floor_quotient(p, q, s);
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if k > i128::from(y_limit) {
            return None;
        }
        let x = 2 * h - sigma * k;
        if x > 0 && x * x - d * k * k == 4 {
            return Some((x as i64, k as i64));
        }
        p = a * q - p;
        q = (d - p * p) / q;
    }
}

/// floor((p + sqrt D)/q) given s = floor(sqrt D), D not a square.
fn floor_quotient(p: i128, q: i128, s: i128) -> i128 {
    if q > 0 {
        Integer::div_floor(&(p + s), &q)
    } else {
        Integer::div_floor(&(p + s + 1), &q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smallest y >= 1 with D y^2 + 4 a perfect square.
    fn brute(d: i64, limit: i64) -> Option<(i64, i64)> {
        (1..=limit).find_map(|y| {
            let v = d * y * y + 4;
            let x = v.isqrt();
            (x * x == v).then_some((x, y))
        })
    }

    #[test]
    fn matches_brute_force_search() {
        for d in 5..3000i64 {
            if d % 4 > 1 || d.isqrt().pow(2) == d {
                continue;
            }
            assert_eq!(pell4_fundamental(d, 200), brute(d, 200), "D = {d}");
        }
    }

    #[test]
    fn classic_units() {
        assert_eq!(pell4_fundamental(5, 10), Some((3, 1)));
        assert_eq!(pell4_fundamental(8, 10), Some((6, 2)));
        assert_eq!(pell4_fundamental(12, 10), Some((4, 1)));
        // 61: fundamental unit of norm -1 is (39 + 5 sqrt 61)/2; its square has y = 195.
        assert_eq!(pell4_fundamental(61, 1000), Some((1523, 195)));
        assert_eq!(pell4_fundamental(61, 100), None);
    }
}
