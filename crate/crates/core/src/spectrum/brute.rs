//! Brute-force oracle: enumerate bounded integer matrices of determinant 1,
//! split them into conjugacy classes by orbit search, and read off roots.

use std::collections::{BTreeMap, HashMap};

use super::modular::{max_trace, primitive_length};
use crate::model::{GeodesicRecord, LengthSpectrum};

type Mat = [i64; 4]; // [a, b, c, d]

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn matrices_with_trace(trace: i64, bound: i64) -> Vec<Mat> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        let d = trace - a;
        if d.abs() > bound {
            continue;
        }
        let bc = a * d - 1;
        for b in (-bound..=bound).filter(|&b| b != 0) {
            if bc % b == 0 && (bc / b).abs() <= bound {
                out.push([a, b, bc / b, d]);
            }
        }
    }
    out
}

/// Conjugates by S, T and T^-1.
fn neighbours(m: &Mat) -> [Mat; 3] {
    let [a, b, c, d] = *m;
    [
        [d, -c, -b, a],
        [a + c, b + d - a - c, c, d - c],
        [a - c, b + a - d - c, c, d + c],
    ]
}

/// Conjugacy classes (as representatives) of matrices with the given trace
/// and entries bounded by `bound`. Classes whose members cannot be linked
/// inside the box may be split or missed.
pub fn conjugacy_classes(trace: i64, bound: i64) -> Vec<Mat> {
    let mats = matrices_with_trace(trace, bound);
    let index: HashMap<Mat, usize> = mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut sets = DisjointSets::new(mats.len());
    for (i, m) in mats.iter().enumerate() {
        for nb in neighbours(m) {
            if let Some(&j) = index.get(&nb) {
                sets.union(i, j);
            }
        }
    }
    let mut reps = BTreeMap::new();
    for (i, m) in mats.iter().enumerate() {
        let root = sets.find(i);
        reps.entry(root).or_insert(*m);
    }
    reps.into_values().collect()
}

/// Returns (root trace s, power k) with M = delta^k for an integer matrix
/// delta of trace s and k maximal; (trace, 1) when M is primitive.
pub fn primitive_root(m: &Mat) -> (i64, u32) {
    let [a, b, c, d] = *m;
    let trace = a + d;
    let mut s = 3;
    while s * s - 2 <= trace {
        // u[k] = U_{k-1}(s) with delta^k = U_{k-1} delta - U_{k-2} I
        let (mut u_prev, mut u) = (1i64, s); // U_0, U_1
        let mut k = 2u32;
        loop {
            // trace(delta^k) = s U_{k-1} - 2 U_{k-2}
            let tr = s * u - 2 * u_prev;
            if tr > trace {
                break;
            }
            if tr == trace {
                let shift = u_prev;
                let (ra, rb, rc, rd) = (a + shift, b, c, d + shift);
                if [ra, rb, rc, rd].iter().all(|e| e % u == 0) {
                    let root = [ra / u, rb / u, rc / u, rd / u];
                    if root[0] * root[3] - root[1] * root[2] == 1 {
                        return (s, k);
                    }
                }
            }
            (u_prev, u) = (u, s * u - u_prev);
            k += 1;
        }
        s += 1;
    }
    (trace, 1)
}

pub fn brute_force_spectrum(norm_bound: f64, entry_bound: i64) -> LengthSpectrum {
    let mut groups: BTreeMap<(i64, i64, u32), u64> = BTreeMap::new();
    if let Some(t_max) = max_trace(norm_bound) {
        for trace in 3..=t_max {
            for rep in conjugacy_classes(trace, entry_bound) {
                let (s, k) = primitive_root(&rep);
                *groups.entry((trace, s, k)).or_default() += 1;
            }
        }
    }
    let records = groups
        .into_iter()
        .map(|((trace, s, k), count)| {
            let length = primitive_length(trace);
            GeodesicRecord {
                norm: length.exp(),
                length,
                weight: primitive_length(s),
                primitive: k == 1,
                multiplicity: count,
            }
        })
        .filter(|r| r.norm <= norm_bound)
        .collect();
    LengthSpectrum::new(records, norm_bound.max(1.0 + f64::EPSILON))
        .expect("brute-force records are consistent by construction")
}
