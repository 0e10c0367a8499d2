use std::collections::{BTreeMap, HashMap};

use crate::cartan::MultiDegree;
use crate::grading::Bound;
use crate::liealg::GradedAlgebra;

/// Degree of `E_ij^r` in `T̃⁺(n)` (indices 1-based), or `None` when the
/// element does not exist (`i ≥ j` with `r = 0`).
pub fn tplus_degree(n: usize, i: usize, j: usize, r: u32) -> Option<MultiDegree> {
    assert!((1..=n).contains(&i) && (1..=n).contains(&j));
    if i >= j && r == 0 {
        return None;
    }
    let mut k = vec![r; n];
    if i < j {
        for x in &mut k[(i - 1)..(j - 1)] {
            *x = r + 1;
        }
    } else if i > j {
        for x in &mut k[(j - 1)..(i - 1)] {
            *x = r - 1;
        }
    }
    Some(MultiDegree(k))
}

/// `−Σ k_i² + Σ k_i k_{i+1} + Σ k_i` with `k_{n+1} = k_1`.
pub fn tplus_energy(k: &MultiDegree) -> i64 {
    let k = k.as_i64();
    let n = k.len();
    (0..n)
        .map(|i| -k[i] * k[i] + k[i] * k[(i + 1) % n] + k[i])
        .sum()
}

/// Orthonormal basis of `{x ∈ ℝⁿ : Σ x_i = 0}` from Gram–Schmidt on
/// `e_s − e_{s+1}`.
fn trace_zero_basis(n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for s in 0..n - 1 {
        let mut v = vec![0.0; n];
        v[s] = 1.0;
        v[s + 1] = -1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
}

// sparse matrix with polynomial entries: (row, col, power) -> coefficient
type PolyMatrix = Vec<(usize, usize, u32, f64)>;

fn commutator(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let mut out = Vec::new();
    for &(a, b, r, u) in x {
        for &(c, d, s, v) in y {
            if b == c {
                out.push((a, d, r + s, u * v));
            }
            if d == a {
                out.push((c, b, r + s, -u * v));
            }
        }
    }
    out
}

/// The trace-zero current algebra `T⁺(n)` truncated at total degree
/// `max_total`. Off-diagonal `E_ij^r` are kept as basis vectors; the diagonal
/// part at each power `t^r` uses the orthonormal trace-zero basis of
/// [`trace_zero_basis`].
pub fn tplus_algebra(n: usize, max_total: u32) -> GradedAlgebra {
    assert!(n >= 2, "need n >= 2");
    let diag = trace_zero_basis(n);
    let mut elems: Vec<PolyMatrix> = Vec::new();
    let mut degrees = Vec::new();
    let mut off_index: HashMap<(usize, usize, u32), usize> = HashMap::new();
    let mut diag_index: HashMap<u32, usize> = HashMap::new();
    let max_r = max_total / n as u32 + 1;
    for r in 0..=max_r {
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                if let Some(k) = tplus_degree(n, i, j, r) {
                    if k.total() <= max_total {
                        off_index.insert((i, j, r), elems.len());
                        elems.push(vec![(i - 1, j - 1, r, 1.0)]);
                        degrees.push(k);
                    }
                }
            }
        }
        if r >= 1 && (n as u32) * r <= max_total {
            diag_index.insert(r, elems.len());
            for b in &diag {
                elems.push(
                    b.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0.0)
                        .map(|(s, &x)| (s, s, r, x))
                        .collect(),
                );
                degrees.push(MultiDegree(vec![r; n]));
            }
        }
    }

    let (mut alg, label) = super::assemble(
        &format!("T+({n})"),
        n,
        &degrees,
        Some(&Bound::total(max_total)),
    )
    .expect("components are consistent");

    for a in 0..elems.len() {
        for b in 0..elems.len() {
            if label[a] >= label[b] || degrees[a].total() + degrees[b].total() > max_total {
                continue;
            }
            let prod = commutator(&elems[a], &elems[b]);
            let mut offd: BTreeMap<u32, f64> = BTreeMap::new();
            let mut diags: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            for (i, j, r, x) in prod {
                if i == j {
                    diags.entry(r).or_insert_with(|| vec![0.0; n])[i] += x;
                } else {
                    let e = off_index[&(i + 1, j + 1, r)];
                    *offd.entry(label[e]).or_default() += x;
                }
            }
            let mut terms: Vec<(u32, f64)> = offd.into_iter().collect();
            for (r, v) in diags {
                let first = diag_index[&r];
                for (s, bvec) in diag.iter().enumerate() {
                    let c: f64 = v.iter().zip(bvec).map(|(x, y)| x * y).sum();
                    terms.push((label[first + s], c));
                }
            }
            alg.set_bracket(label[a], label[b], terms)
                .expect("commutators are degree additive");
        }
    }
    alg
}
