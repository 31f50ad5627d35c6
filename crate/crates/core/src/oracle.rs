//! Independent reference computations for tests: plain numerical
//! quadrature, brute-force re-summation and the like. Nothing here is used
//! by the library itself.

use num_complex::Complex64;

use crate::model::LengthSpectrum;

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// li(x) for x > 1 as the regularized principal value
/// int_0^x (1/log t - 1/(t - 1)) dt + log(x - 1).
pub fn li_principal_value(x: f64) -> f64 {
    let g = |t: f64| {
        let u = t - 1.0;
        if t <= 0.0 {
            1.0
        } else if u.abs() < 1e-4 {
            0.5 - u / 12.0 + u * u / 24.0
        } else {
            1.0 / t.ln() - 1.0 / u
        }
    };
    // On (0, 1/2] substitute t = exp(-v) to remove the cusp at t = 0.
    let tail = |v: f64| g((-v).exp()) * (-v).exp();
    let mut total = adaptive_simpson(&tail, std::f64::consts::LN_2, 45.0, 1e-15);
    let mut a = 0.5;
    for b in [1.0, 2.0, 8.0, 64.0, 512.0] {
        if b >= x {
            break;
        }
        total += adaptive_simpson(&g, a, b, 1e-15 * b);
        a = b;
    }
    total += adaptive_simpson(&g, a, x, 1e-15 * x);
    total + (x - 1.0).ln()
}

/// Values of the j-fold iterated integral of psi_0 at `x`, obtained by
/// repeated cumulative trapezoid integration on a grid of spacing <= `h`
/// that contains every jump of psi_0 as a doubled node.
pub fn iterated_psi_trapezoid(spectrum: &LengthSpectrum, x: f64, j: u32, h: f64) -> f64 {
    // nodes (t, value of psi_0 on the right-hand side of the node's interval)
    let mut nodes: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let jumps: Vec<f64> = spectrum
        .records()
        .iter()
        .map(|r| r.norm)
        .filter(|&n| n <= x)
        .collect();
    let mut level = 0.0;
    let mut start = 0.0;
    let push_segment = |from: f64, to: f64, level: f64, nodes: &mut Vec<f64>, values: &mut Vec<f64>| {
        let steps = (((to - from) / h).ceil() as usize).max(1);
        for s in 0..=steps {
            nodes.push(from + (to - from) * s as f64 / steps as f64);
            values.push(level);
        }
    };
    let mut i = 0;
    while i < jumps.len() {
        let n = jumps[i];
        push_segment(start, n, level, &mut nodes, &mut values);
        while i < jumps.len() && jumps[i] == n {
            let r = &spectrum.records()[i];
            level += r.weight * r.multiplicity as f64;
            i += 1;
        }
        start = n;
    }
    push_segment(start, x, level, &mut nodes, &mut values);

    let mut current = values;
    for _ in 0..j {
        let mut next = Vec::with_capacity(current.len());
        let mut acc = 0.0;
        next.push(0.0);
        for k in 1..nodes.len() {
            acc += 0.5 * (nodes[k] - nodes[k - 1]) * (current[k] + current[k - 1]);
            next.push(acc);
        }
        current = next;
    }
    *current.last().unwrap()
}

/// Ten-point Gauss-Legendre rule on [a, b].
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    const NODES: [(f64, f64); 5] = [
        (0.148_874_338_981_631_2, 0.295_524_224_714_752_87),
        (0.433_395_394_129_247_2, 0.269_266_719_309_996_35),
        (0.679_409_568_299_024_4, 0.219_086_362_515_982_04),
        (0.865_063_366_688_984_5, 0.149_451_349_150_580_6),
        (0.973_906_528_517_171_7, 0.066_671_344_308_688_14),
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * NODES
        .iter()
        .map(|&(t, w)| w * (f(mid - half * t) + f(mid + half * t)))
        .sum::<f64>()
}

/// The iterated-integral definition of the forward averaging operator:
/// int_x^{x+d} int_{t_j}^{t_j+d} ... f^(j)(t_1) dt_1 ... dt_j, evaluated by
/// nested Gauss-Legendre quadrature given the j-th derivative. Exact for
/// polynomials of degree < 20.
pub fn nested_forward_integral<F: Fn(f64) -> f64>(deriv_j: &F, x: f64, d: f64, j: u32) -> f64 {
    if j == 0 {
        return deriv_j(x);
    }
    let inner = |t: f64| nested_forward_integral(deriv_j, t, d, j - 1);
    gauss_legendre(&inner, x, x + d)
}

/// Double-double accumulator (Knuth two-sum), ~32 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub fn add(&mut self, v: f64) {
        let s = self.hi + v;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (v - bb);
        let lo = self.lo + err;
        let hi = s + lo;
        self.lo = lo - (hi - s);
        self.hi = hi;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Brute-force term x^(alpha + j) / prod_{k=0}^{j} (alpha + k) computed in
/// polar form (log-modulus and argument), independent of complex division.
pub fn polar_term(alpha: Complex64, log_x: f64, j: u32) -> Complex64 {
    let mut log_mod = (alpha.re + f64::from(j)) * log_x;
    let mut arg = alpha.im * log_x;
    for k in 0..=j {
        let z = alpha + f64::from(k);
        log_mod -= z.norm().ln();
        arg -= z.im.atan2(z.re);
    }
    Complex64::from_polar(log_mod.exp(), arg)
}
