//! Closed-form Laplacian spectrum of `L₁(1)` and numeric spectra of arbitrary
//! graded algebras.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::cartan::MultiDegree;
use crate::error::{Error, Result};
use crate::liealg::{DegreeComplex, GradedAlgebra};
use crate::par;

/// Default absolute tolerance for clustering eigenvalues.
pub const CLUSTER_TOL: f64 = 1e-6;

/// `(i₁, …, i_q)` with `i₁ ≥ 1` and consecutive gaps at least 3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IndexTuple(Vec<u32>);

impl IndexTuple {
    pub fn new(i: Vec<u32>) -> Result<Self> {
        let ok = !i.is_empty() && i[0] >= 1 && i.windows(2).all(|w| w[1] >= w[0] + 3);
        if ok {
            Ok(IndexTuple(i))
        } else {
            Err(Error::InvalidTuple(i))
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

fn binom3(n: i64) -> i64 {
    n * (n - 1) * (n - 2) / 6
}

/// `E(i₁,…,i_q) = Σ C(i_s, 3) − Σ_{ℓ<m} i_ℓ i_m`.
pub fn e_value(t: &IndexTuple) -> i64 {
    let i: Vec<i64> = t.0.iter().map(|&x| x as i64).collect();
    let mut e: i64 = i.iter().map(|&x| binom3(x)).sum();
    for l in 0..i.len() {
        for m in l + 1..i.len() {
            e -= i[l] * i[m];
        }
    }
    e
}

/// `α = Σ α_r`: one for `i₁ ≥ 3`, one for each gap larger than 3.
pub fn alpha(t: &IndexTuple) -> u32 {
    let first = u32::from(t.0[0] >= 3);
    first + t.0.windows(2).filter(|w| w[1] - w[0] > 3).count() as u32
}

/// All valid tuples with entries summing to `total`.
pub fn index_tuples(total: u32) -> Vec<IndexTuple> {
    fn rec(min: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<IndexTuple>) {
        if left == 0 {
            out.push(IndexTuple(cur.clone()));
            return;
        }
        for x in min..=left {
            cur.push(x);
            rec(x + 3, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        rec(1, total, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub k: MultiDegree,
    /// Sorted by eigenvalue.
    pub entries: Vec<(f64, usize)>,
}

impl SpectrumTable {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn multiplicity_near(&self, value: f64, tol: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| (e.0 - value).abs() <= tol)
            .map(|e| e.1)
            .sum()
    }
}

/// Predicted spectrum for `C_*^{(d)}(L₁(1))`, equal eigenvalues merged.
pub fn predicted_spectrum(total: u32) -> SpectrumTable {
    let mut pairs: Vec<(i64, usize)> = index_tuples(total)
        .iter()
        .map(|t| (e_value(t), 1usize << alpha(t)))
        .collect();
    pairs.sort();
    let mut entries: Vec<(f64, usize)> = Vec::new();
    let mut last: Option<i64> = None;
    for (e, m) in pairs {
        if last == Some(e) {
            entries.last_mut().expect("nonempty").1 += m;
        } else {
            entries.push((e as f64, m));
            last = Some(e);
        }
    }
    SpectrumTable {
        k: MultiDegree(vec![total]),
        entries,
    }
}

/// Groups sorted values into clusters whose spread is at most `tol`.
pub fn cluster(values: &mut [f64], tol: f64) -> Vec<(f64, usize)> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[start] > tol {
            let group = &values[start..i];
            if !group.is_empty() {
                out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
            }
            start = i;
        }
    }
    out
}

/// Eigenvalues of `Δ_q` on `C_q^(k)`, pooled over all `q`.
pub fn numeric_spectrum(alg: &GradedAlgebra, k: &MultiDegree, cap: usize, tol: f64) -> Result<SpectrumTable> {
    let cx = DegreeComplex::new(alg, k)?;
    let mut values = Vec::with_capacity(cx.total_dim());
    for q in 0..=cx.qmax() {
        let n = cx.dim(q);
        if n == 0 {
            continue;
        }
        if n > cap {
            return Err(Error::MatrixTooLarge { size: n, cap });
        }
        let eig = SymmetricEigen::new(cx.laplacian(q));
        values.extend(eig.eigenvalues.iter().copied());
    }
    Ok(SpectrumTable {
        k: k.clone(),
        entries: cluster(&mut values, tol),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumMismatch {
    pub value: f64,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumComparison {
    pub equal: bool,
    pub mismatches: Vec<SpectrumMismatch>,
}

/// Multiset comparison with eigenvalue tolerance `tol`.
pub fn compare_spectra(a: &SpectrumTable, b: &SpectrumTable, tol: f64) -> SpectrumComparison {
    let (mut i, mut j) = (0, 0);
    let mut mismatches = Vec::new();
    while i < a.entries.len() || j < b.entries.len() {
        let x = a.entries.get(i);
        let y = b.entries.get(j);
        match (x, y) {
            (Some(&(u, m)), Some(&(v, n))) if (u - v).abs() <= tol => {
                if m != n {
                    mismatches.push(SpectrumMismatch { value: u, left: m, right: n });
                }
                i += 1;
                j += 1;
            }
            (Some(&(u, m)), Some(&(v, _))) if u < v => {
                mismatches.push(SpectrumMismatch { value: u, left: m, right: 0 });
                i += 1;
            }
            (Some(&(u, m)), None) => {
                mismatches.push(SpectrumMismatch { value: u, left: m, right: 0 });
                i += 1;
            }
            (_, Some(&(v, n))) => {
                mismatches.push(SpectrumMismatch { value: v, left: 0, right: n });
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    SpectrumComparison {
        equal: mismatches.is_empty(),
        mismatches,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub degree: u32,
    pub predicted: Vec<(f64, usize)>,
    pub numeric: Vec<(f64, usize)>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct L1Report {
    pub rows: Vec<SpectrumRow>,
    /// Comparison of the spectra summed over all degrees.
    pub global: SpectrumComparison,
    pub all_match: bool,
}

fn merge(tables: &[&SpectrumTable], tol: f64) -> SpectrumTable {
    let mut entries: Vec<(f64, usize)> = tables.iter().flat_map(|t| t.entries.iter().copied()).collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (v, m) in entries {
        match out.last_mut() {
            Some(last) if (v - last.0).abs() <= tol => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    SpectrumTable {
        k: MultiDegree(vec![]),
        entries: out,
    }
}

/// Compares predicted and numeric spectra of `L₁(1)` for degrees `1..=max_degree`.
pub fn l1_report(max_degree: u32, cap: usize, tol: f64) -> Result<L1Report> {
    let alg = crate::oracles::l1_algebra(max_degree);
    let degrees: Vec<u32> = (1..=max_degree).collect();
    let pairs = par::try_map(&degrees, |&d| -> Result<(SpectrumTable, SpectrumTable)> {
        Ok((predicted_spectrum(d), numeric_spectrum(&alg, &MultiDegree(vec![d]), cap, tol)?))
    })?;
    let rows: Vec<SpectrumRow> = degrees
        .iter()
        .zip(&pairs)
        .map(|(&d, (p, n))| SpectrumRow {
            degree: d,
            predicted: p.entries.clone(),
            numeric: n.entries.clone(),
            matches: compare_spectra(p, n, tol).equal,
        })
        .collect();
    let predicted: Vec<&SpectrumTable> = pairs.iter().map(|p| &p.0).collect();
    let numeric: Vec<&SpectrumTable> = pairs.iter().map(|p| &p.1).collect();
    let global = compare_spectra(&merge(&predicted, tol), &merge(&numeric, tol), tol);
    let all_match = rows.iter().all(|r| r.matches) && global.equal;
    Ok(L1Report { rows, global, all_match })
}
