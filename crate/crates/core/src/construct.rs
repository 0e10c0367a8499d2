//! Degree-by-degree construction of `N(A)` with its canonical metric.
//!
//! At each multidegree `k` the chain spaces `(Λ^q g)^(k)` with `q ≥ 2` only
//! involve lower components, so every column of the block matrix `D₍k₎`
//! indexed by an odd `q ≥ 3` monomial is already known: it stacks `∂_q c`
//! over the `Λ^{q−1}` rows and `δ_q c` over the `Λ^{q+1}` rows. Those columns
//! are pairwise orthogonal with squared norm `E(k)`. The missing `q = 1`
//! columns are an orthonormal completion (scaled by `√E(k)`) supported on the
//! `Λ²` rows, and their entries are the structure constants of the bracket
//! `Λ²g → g^(k)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanMatrix, MultiDegree};
use crate::error::{Error, Result};
use crate::grading::{degree_order, require_below, wedge_basis_capped, Bound, ChainBasis, DEFAULT_MAX_DEGREES};
use crate::liealg::{ad_power, boundary_between, check_jacobi, AlgebraDump, GradedAlgebra, ZERO_COEFF};
use crate::par;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Relative tolerance for Gram-matrix checks, scaled by `max(1, E(k))`.
    pub gram_tol: f64,
    /// Gram–Schmidt drops projected vectors shorter than this.
    pub drop_tol: f64,
    /// Allowed norm of a complement vector outside the `Λ²` rows.
    pub leak_tol: f64,
    pub max_chain_dim: usize,
    pub max_degrees: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            gram_tol: 1e-8,
            drop_tol: 1e-9,
            leak_tol: 1e-9,
            max_chain_dim: 50_000,
            max_degrees: DEFAULT_MAX_DEGREES,
        }
    }
}

/// The partially known matrix `D₍k₎`, restricted to its known columns.
#[derive(Clone, Debug)]
pub struct CompletionProblem {
    pub k: MultiDegree,
    pub energy: i64,
    /// Row blocks `(Λ^q)^(k)` for `q = 2, 4, …`.
    pub even_blocks: Vec<ChainBasis>,
    /// Number of monomials in `(Λ^q)^(k)` for `q = 3, 5, …`.
    pub odd_dims: Vec<usize>,
    /// One column per odd `q ≥ 3` monomial, over the concatenated even rows.
    pub known_columns: Vec<DVector<f64>>,
}

impl CompletionProblem {
    pub fn even_dim(&self) -> usize {
        self.even_blocks.iter().map(ChainBasis::len).sum()
    }

    /// Rows of the `Λ²` block are the first `lambda2_dim` rows.
    pub fn lambda2_dim(&self) -> usize {
        self.even_blocks.first().map_or(0, ChainBasis::len)
    }

    /// `Σ_{q ≥ 2 even} dim Λ^q − Σ_{q ≥ 3 odd} dim Λ^q`.
    pub fn euler_dim(&self) -> i64 {
        self.even_dim() as i64 - self.known_columns.len() as i64
    }
}

#[derive(Clone, Debug)]
pub struct ComponentResult {
    pub k: MultiDegree,
    pub dim: usize,
    /// The completed columns, `√E(k)` times unit vectors.
    pub new_columns: Vec<DVector<f64>>,
    /// `(a, b)` with `a < b` → coefficients of `[a, b]` on the new basis.
    pub bracket_constants: Vec<((u32, u32), Vec<f64>)>,
    pub gram_residual: f64,
    pub known_gram_residual: f64,
    pub leak: f64,
}

fn block_for(q: usize) -> usize {
    (q - 2) / 2
}

/// Collects the known columns of `D₍k₎` from the lower components of `alg`.
pub fn assemble_problem(
    alg: &GradedAlgebra,
    cm: &CartanMatrix,
    k: &MultiDegree,
    opts: &BuildOptions,
) -> Result<CompletionProblem> {
    let energy = cm.energy(k)?;
    if k.total() < 2 || energy <= 0 {
        return Err(Error::EnergyNotPositive {
            k: k.clone(),
            energy,
        });
    }
    require_below(alg, k, false).map_err(|e| match e {
        Error::MissingComponent(j) => Error::PrerequisiteMissing(j),
        e => e,
    })?;

    let qmax = (k.total() as usize).min(alg.num_labels());
    let mut bases: Vec<ChainBasis> = Vec::with_capacity(qmax + 2);
    // q = 0, 1 are placeholders; only q ≥ 2 is used
    for q in 0..=qmax + 1 {
        if q < 2 || q > qmax {
            bases.push(ChainBasis::new(k.clone(), q, vec![]));
        } else {
            bases.push(wedge_basis_capped(alg, k, q, opts.max_chain_dim)?);
        }
    }

    let even_blocks: Vec<ChainBasis> = (2..=qmax).step_by(2).map(|q| bases[q].clone()).collect();
    let mut offsets = Vec::with_capacity(even_blocks.len() + 1);
    let mut acc = 0;
    for b in &even_blocks {
        offsets.push(acc);
        acc += b.len();
    }
    let rows = acc;

    let mut known_columns = Vec::new();
    let mut odd_dims = Vec::new();
    for q in (3..=qmax).step_by(2) {
        let n = bases[q].len();
        odd_dims.push(n);
        if n == 0 {
            continue;
        }
        let down = boundary_between(alg, &bases[q], &bases[q - 1]);
        let up = boundary_between(alg, &bases[q + 1], &bases[q]);
        let lo = offsets[block_for(q - 1)];
        let hi = block_for(q + 1);
        let cols = par::map_range(n, |j| {
            let mut v = DVector::zeros(rows);
            for i in 0..down.nrows() {
                v[lo + i] = down[(i, j)];
            }
            if hi < offsets.len() {
                let off = offsets[hi];
                for i in 0..up.ncols() {
                    v[off + i] = up[(j, i)];
                }
            }
            v
        });
        known_columns.extend(cols);
    }

    Ok(CompletionProblem {
        k: k.clone(),
        energy,
        even_blocks,
        odd_dims,
        known_columns,
    })
}

fn gram_residual(cols: &[DVector<f64>], lambda: f64) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    let m = DMatrix::from_columns(cols);
    let g = m.transpose() * &m;
    let mut r: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let t = if i == j { lambda } else { 0.0 };
            r = r.max((g[(i, j)] - t).abs());
        }
    }
    r
}

fn project_out(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for u in basis {
        let dot = u.dot(v);
        v.axpy(-dot, u, 1.0);
    }
}

/// Completes the known columns to `√E(k)` times an orthogonal matrix.
///
/// Standard basis vectors of the `Λ²` rows are projected, in lexicographic
/// order, against the normalized known columns and the vectors accepted so
/// far (modified Gram–Schmidt with one reorthogonalization pass).
pub fn complete_component(problem: &CompletionProblem, opts: &BuildOptions) -> Result<ComponentResult> {
    let k = &problem.k;
    let e = problem.energy as f64;
    let scale = e.max(1.0);
    let known_gram = gram_residual(&problem.known_columns, e);
    if known_gram > opts.gram_tol * scale {
        return Err(Error::InvariantViolation {
            k: k.clone(),
            residual: known_gram,
        });
    }
    let expected = problem.euler_dim();
    if expected < 0 {
        return Err(Error::CompletionCount {
            k: k.clone(),
            expected,
            found: 0,
        });
    }
    let m = expected as usize;
    let rows = problem.even_dim();
    let l2 = problem.lambda2_dim();
    let root = e.sqrt();

    let mut ortho: Vec<DVector<f64>> = problem.known_columns.iter().map(|c| c / root).collect();
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(m);
    for r in 0..l2 {
        if accepted.len() == m {
            break;
        }
        let mut v = DVector::zeros(rows);
        v[r] = 1.0;
        for _ in 0..2 {
            project_out(&mut v, &ortho);
        }
        let norm = v.norm();
        if norm > opts.drop_tol {
            v /= norm;
            ortho.push(v.clone());
            accepted.push(v);
        }
    }
    if accepted.len() != m {
        return Err(Error::CompletionCount {
            k: k.clone(),
            expected,
            found: accepted.len(),
        });
    }

    let mut leak: f64 = 0.0;
    for u in &mut accepted {
        let outside = u.rows(l2, rows - l2).norm();
        leak = leak.max(outside);
        let pivot = (0..l2).find(|&i| u[i].abs() > 1e-8).unwrap_or(0);
        if u[pivot] < 0.0 {
            *u *= -1.0;
        }
    }
    if leak > opts.leak_tol {
        return Err(Error::ComplementLeak { k: k.clone(), leak });
    }

    let new_columns: Vec<DVector<f64>> = accepted.iter().map(|u| u * root).collect();
    let mut all = problem.known_columns.clone();
    all.extend(new_columns.iter().cloned());
    let gram = gram_residual(&all, e);

    let mut bracket_constants = Vec::new();
    if let Some(block) = problem.even_blocks.first() {
        for (r, mono) in block.monomials.iter().enumerate() {
            let coeffs: Vec<f64> = new_columns.iter().map(|c| c[r]).collect();
            if coeffs.iter().any(|x| x.abs() > ZERO_COEFF) {
                bracket_constants.push(((mono.0[0], mono.0[1]), coeffs));
            }
        }
    }

    Ok(ComponentResult {
        k: k.clone(),
        dim: m,
        new_columns,
        bracket_constants,
        gram_residual: gram,
        known_gram_residual: known_gram,
        leak,
    })
}

/// Predicted `dim g^(k)` from the alternating sum over `q ≥ 2`.
pub fn euler_dimension(alg: &GradedAlgebra, k: &MultiDegree) -> Result<i64> {
    require_below(alg, k, false).map_err(|e| match e {
        Error::MissingComponent(j) => Error::PrerequisiteMissing(j),
        e => e,
    })?;
    let mut sum = 0i64;
    for q in 2..=k.total() as usize {
        let n = wedge_basis_capped(alg, k, q, usize::MAX)?.len() as i64;
        sum += if q % 2 == 0 { n } else { -n };
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeStatus {
    /// A generator `e_i`.
    Generator,
    /// `E(k) ≤ 0` with `|k| ≥ 2`; the component is zero.
    NonPositiveEnergy,
    /// Completed with at least one new basis vector.
    Completed,
    /// `E(k) > 0` but no new columns were needed.
    NoNewColumns,
}

/// Per-degree provenance of a build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub k: MultiDegree,
    #[serde(rename = "E")]
    pub energy: i64,
    pub dim: usize,
    pub status: DegreeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_dim: Option<i64>,
    pub gram_residual: f64,
    pub jacobi_residual: f64,
    pub leak: f64,
}

/// A constructed `N(A)` together with its provenance.
#[derive(Clone, Debug)]
pub struct Construction {
    pub cartan: CartanMatrix,
    pub bound: Bound,
    pub algebra: GradedAlgebra,
    pub records: Vec<DegreeRecord>,
}

impl Construction {
    pub fn dump(&self) -> AlgebraDump {
        let mut d = AlgebraDump::from_algebra(&self.algebra, Some(&self.cartan));
        d.provenance = Some(self.records.clone());
        d
    }

    pub fn record(&self, k: &MultiDegree) -> Option<&DegreeRecord> {
        self.records.iter().find(|r| &r.k == k)
    }

    /// Closes the algebra if some complete total-degree level inside the
    /// bound is zero; since `N(A)` is generated in degree one, every higher
    /// degree then vanishes too.
    pub fn close_if_exhausted(&mut self) -> bool {
        let n = self.cartan.rank() as u64;
        let mut per_level: std::collections::BTreeMap<u32, (u64, bool)> = std::collections::BTreeMap::new();
        for r in &self.records {
            let e = per_level.entry(r.k.total()).or_insert((0, true));
            e.0 += 1;
            e.1 &= r.dim == 0;
        }
        // number of degrees of total s in rank n is C(s+n−1, n−1)
        let full = |s: u32| (1..n).fold(1u64, |acc, i| acc * (s as u64 + i) / i);
        let exhausted = per_level.iter().any(|(&s, &(count, zero))| zero && count == full(s));
        if exhausted {
            self.algebra.close();
        }
        exhausted
    }
}

/// Builds `N(A)` on every degree inside `bound`.
pub fn build(cm: &CartanMatrix, bound: &Bound, opts: &BuildOptions) -> Result<Construction> {
    let n = cm.rank();
    let order = degree_order(n, bound, opts.max_degrees)?;
    let mut alg = GradedAlgebra::new(format!("N(A) for {:?}", cm.entries()), n);
    let mut records = Vec::with_capacity(order.degrees.len());
    for k in order.degrees {
        let energy = cm.energy(&k)?;
        if k.total() == 1 {
            alg.add_component(k.clone(), 1)?;
            records.push(DegreeRecord {
                k,
                energy,
                dim: 1,
                status: DegreeStatus::Generator,
                euler_dim: None,
                gram_residual: 0.0,
                jacobi_residual: 0.0,
                leak: 0.0,
            });
            continue;
        }
        if energy <= 0 {
            alg.add_component(k.clone(), 0)?;
            records.push(DegreeRecord {
                k,
                energy,
                dim: 0,
                status: DegreeStatus::NonPositiveEnergy,
                euler_dim: None,
                gram_residual: 0.0,
                jacobi_residual: 0.0,
                leak: 0.0,
            });
            continue;
        }
        let problem = assemble_problem(&alg, cm, &k, opts)?;
        let euler = problem.euler_dim();
        let result = complete_component(&problem, opts)?;
        let labels = alg.add_component(k.clone(), result.dim)?;
        for ((a, b), coeffs) in &result.bracket_constants {
            let terms = coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (labels.start + i as u32, c))
                .collect();
            alg.set_bracket(*a, *b, terms)?;
        }
        let jacobi = check_jacobi(&alg, &k)?;
        records.push(DegreeRecord {
            k,
            energy,
            dim: result.dim,
            status: if result.dim > 0 {
                DegreeStatus::Completed
            } else {
                DegreeStatus::NoNewColumns
            },
            euler_dim: Some(euler),
            gram_residual: result.gram_residual,
            jacobi_residual: jacobi,
            leak: result.leak,
        });
    }
    Ok(Construction {
        cartan: cm.clone(),
        bound: bound.clone(),
        algebra: alg,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SerreEntry {
    pub i: usize,
    pub j: usize,
    pub k: MultiDegree,
    #[serde(rename = "E")]
    pub energy: i64,
    pub dim: usize,
    /// `‖(ad e_i)^{1−a_ij} e_j‖`.
    pub ad_norm: f64,
    pub pass: bool,
}

/// Checks every Serre relation `(ad e_i)^{1−a_ij} e_j = 0` in a built algebra.
pub fn serre_check(alg: &GradedAlgebra, cm: &CartanMatrix) -> Result<Vec<SerreEntry>> {
    let n = cm.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let k = cm.serre_degree(i, j);
            if !alg.is_finalized(&k) {
                return Err(Error::BoundTooSmall(k));
            }
            let energy = cm.energy(&k)?;
            let dim = alg.dim(&k).unwrap_or(0);
            let m = (1 - cm.entry(i, j)) as u32;
            let ad_norm = ad_power(alg, i, j, m)?.norm();
            out.push(SerreEntry {
                i: i + 1,
                j: j + 1,
                k,
                energy,
                dim,
                ad_norm,
                pass: energy == 0 && dim == 0 && ad_norm == 0.0,
            });
        }
    }
    Ok(out)
}

/// Finds signs `s_l ∈ {±1}` with `s_a s_b s_c · A[a,b;c] = B[a,b;c]` for all
/// structure constants, matching labels by degree. Both algebras must have
/// the same degrees, all of dimension at most one. Returns the signs in
/// the label order of `a`.
pub fn match_up_to_signs(a: &GradedAlgebra, b: &GradedAlgebra, tol: f64) -> std::result::Result<Vec<i8>, String> {
    let n = a.num_labels();
    if n != b.num_labels() {
        return Err(format!("label counts differ: {} vs {}", n, b.num_labels()));
    }
    let mut to_b = Vec::with_capacity(n);
    for l in 0..n as u32 {
        let k = a.label_degree(l);
        if a.component_labels(k).len() != 1 {
            return Err(format!("component {k} is not one-dimensional"));
        }
        let r = b.component_labels(k);
        if r.len() != 1 {
            return Err(format!("second algebra has no single basis vector at {k}"));
        }
        to_b.push(r.start);
    }
    let words = n.div_ceil(64) + 1;
    let rhs_bit = n;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let set = |row: &mut Vec<u64>, bit: usize| row[bit / 64] ^= 1 << (bit % 64);
    for x in 0..n as u32 {
        for y in (x + 1)..n as u32 {
            let ta = a.bracket(x, y);
            let tb = b.bracket(to_b[x as usize], to_b[y as usize]);
            let ca = ta.first().map(|t| (t.0, t.1));
            let cb = tb.first().map(|t| t.1).unwrap_or(0.0);
            let va = ca.map_or(0.0, |c| c.1);
            if (va.abs() - cb.abs()).abs() > tol {
                return Err(format!(
                    "|[{}, {}]| differs: {va} vs {cb}",
                    a.label_degree(x),
                    a.label_degree(y)
                ));
            }
            if va.abs() <= tol {
                continue;
            }
            let c = ca.expect("nonzero").0 as usize;
            let mut row = vec![0u64; words];
            set(&mut row, x as usize);
            set(&mut row, y as usize);
            set(&mut row, c);
            if (va < 0.0) != (cb < 0.0) {
                set(&mut row, rhs_bit);
            }
            rows.push(row);
        }
    }
    // Gaussian elimination over GF(2)
    let bit = |row: &Vec<u64>, i: usize| (row[i / 64] >> (i % 64)) & 1 == 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], col)) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && bit(&rows[i], col) {
                let pivot = rows[r].clone();
                for (w, pw) in rows[i].iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| bit(row, rhs_bit)) {
        return Err("no consistent sign change exists".into());
    }
    let mut signs = vec![1i8; n];
    for (i, &col) in pivots.iter().enumerate() {
        if bit(&rows[i], rhs_bit) {
            signs[col] = -1;
        }
    }
    Ok(signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    fn deg(k: &[u32]) -> MultiDegree {
        MultiDegree(k.to_vec())
    }

    fn partial(cm: &CartanMatrix, upto: &MultiDegree) -> GradedAlgebra {
        // build every degree strictly before `upto` in construction order
        let full = build(cm, &Bound::total(upto.total()), &BuildOptions::default()).unwrap();
        let mut alg = GradedAlgebra::new("partial", cm.rank());
        for (k, c) in full.algebra.components() {
            if k >= upto {
                break;
            }
            alg.add_component(k.clone(), c.dim).unwrap();
        }
        for (&(a, b), terms) in full.algebra.brackets() {
            if (a as usize) < alg.num_labels() && terms.iter().all(|t| (t.0 as usize) < alg.num_labels()) {
                alg.set_bracket(a, b, terms.clone()).unwrap();
            }
        }
        alg
    }

    #[test]
    fn g2_first_steps() {
        let cm = CartanMatrix::g2();
        let opts = BuildOptions::default();
        let alg = partial(&cm, &deg(&[1, 1]));
        let p = assemble_problem(&alg, &cm, &deg(&[1, 1]), &opts).unwrap();
        assert_eq!(p.even_dim(), 1);
        assert!(p.known_columns.is_empty());
        assert_eq!(p.euler_dim(), 1);
        let r = complete_component(&p, &opts).unwrap();
        assert_eq!(r.dim, 1);
        assert_eq!(r.bracket_constants.len(), 1);
        assert!((r.bracket_constants[0].1[0].abs() - 3f64.sqrt()).abs() < 1e-12);

        // E(2,1) = 0 gates the assembly
        let alg = partial(&cm, &deg(&[2, 1]));
        assert!(matches!(
            assemble_problem(&alg, &cm, &deg(&[2, 1]), &opts),
            Err(Error::EnergyNotPositive { .. })
        ));
    }

    #[test]
    fn g2_second_bracket() {
        let cm = CartanMatrix::g2();
        let opts = BuildOptions::default();
        let alg = partial(&cm, &deg(&[1, 2]));
        let p = assemble_problem(&alg, &cm, &deg(&[1, 2]), &opts).unwrap();
        let r = complete_component(&p, &opts).unwrap();
        assert_eq!(r.dim, 1);
        let mags: Vec<f64> = r.bracket_constants.iter().map(|(_, c)| c[0].abs()).collect();
        assert_eq!(mags.len(), 1);
        assert!((mags[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn a2_gives_n3() {
        let cm = CartanMatrix::a2();
        let c = build(&cm, &Bound::total(3), &BuildOptions::default()).unwrap();
        let dims: Vec<(Vec<u32>, usize)> = c
            .algebra
            .components()
            .filter(|(_, c)| c.dim > 0)
            .map(|(k, c)| (k.0.clone(), c.dim))
            .collect();
        assert_eq!(dims, vec![(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)]);
        let b = c.algebra.bracket(0, 1);
        assert_eq!(b.len(), 1);
        assert!((b[0].1.abs() - 1.0).abs() < 1e-14);
        let n3 = oracles::upper_triangular(3);
        assert!(match_up_to_signs(&c.algebra, &n3, 1e-9).is_ok());
    }

    #[test]
    fn prerequisites_are_enforced() {
        let cm = CartanMatrix::a2();
        let alg = GradedAlgebra::new("empty", 2);
        assert!(matches!(
            assemble_problem(&alg, &cm, &deg(&[1, 1]), &BuildOptions::default()),
            Err(Error::PrerequisiteMissing(_))
        ));
        assert!(matches!(euler_dimension(&alg, &deg(&[1, 1])), Err(Error::PrerequisiteMissing(_))));
    }

    #[test]
    fn invariant_violation_is_reported() {
        let cm = CartanMatrix::g2();
        let opts = BuildOptions::default();
        let alg = partial(&cm, &deg(&[2, 3]));
        let mut p = assemble_problem(&alg, &cm, &deg(&[2, 3]), &opts).unwrap();
        assert!(!p.known_columns.is_empty());
        p.known_columns[0] *= 1.5;
        assert!(matches!(complete_component(&p, &opts), Err(Error::InvariantViolation { .. })));
    }

    #[test]
    fn degenerate_completion_has_no_new_columns() {
        // one known column already spanning a one-dimensional even block
        let k = deg(&[3]);
        let p = CompletionProblem {
            k: k.clone(),
            energy: 4,
            even_blocks: vec![ChainBasis::new(k, 2, vec![crate::grading::WedgeMonomial(vec![0, 1])])],
            odd_dims: vec![1],
            known_columns: vec![DVector::from_vec(vec![2.0])],
        };
        let r = complete_component(&p, &BuildOptions::default()).unwrap();
        assert_eq!(r.dim, 0);
        assert!(r.bracket_constants.is_empty());
        assert!(r.gram_residual < 1e-15);
    }

    #[test]
    fn leak_is_detected() {
        // a known column living only on the Λ⁴ row leaves the Λ² row free;
        // one living on both forces its complement to leak
        let k = deg(&[10]);
        let blocks = vec![
            ChainBasis::new(k.clone(), 2, vec![crate::grading::WedgeMonomial(vec![0, 1])]),
            ChainBasis::new(k.clone(), 4, vec![crate::grading::WedgeMonomial(vec![0, 1, 2, 3])]),
        ];
        let p = CompletionProblem {
            k,
            energy: 2,
            even_blocks: blocks,
            odd_dims: vec![1],
            known_columns: vec![DVector::from_vec(vec![1.0, 1.0])],
        };
        assert!(matches!(
            complete_component(&p, &BuildOptions::default()),
            Err(Error::ComplementLeak { .. })
        ));
    }

    #[test]
    fn euler_dimension_examples() {
        let cm = CartanMatrix::g2();
        let alg = partial(&cm, &deg(&[1, 1]));
        assert_eq!(euler_dimension(&alg, &deg(&[1, 1])).unwrap(), 1);
        let alg = partial(&cm, &deg(&[2, 3]));
        assert_eq!(euler_dimension(&alg, &deg(&[2, 3])).unwrap(), 1);
    }

    #[test]
    fn exhausted_builds_close() {
        let mut c = build(&CartanMatrix::a2(), &Bound::total(3), &BuildOptions::default()).unwrap();
        assert!(c.close_if_exhausted());
        assert!(c.algebra.is_finalized(&deg(&[7, 9])));
        let mut g = build(&CartanMatrix::g2(), &Bound::total(4), &BuildOptions::default()).unwrap();
        assert!(!g.close_if_exhausted());
        let mut a = build(&CartanMatrix::a22(), &Bound::total(8), &BuildOptions::default()).unwrap();
        assert!(!a.close_if_exhausted());
    }

    #[test]
    fn serre_relations_hold_for_a2() {
        let cm = CartanMatrix::a2();
        let c = build(&cm, &Bound::total(3), &BuildOptions::default()).unwrap();
        let rep = serre_check(&c.algebra, &cm).unwrap();
        assert_eq!(rep.len(), 2);
        assert!(rep.iter().all(|e| e.pass));
        let small = build(&cm, &Bound::total(2), &BuildOptions::default()).unwrap();
        assert!(matches!(serre_check(&small.algebra, &cm), Err(Error::BoundTooSmall(_))));
    }

    #[test]
    fn sign_matcher_finds_flips() {
        let n4 = oracles::upper_triangular(4);
        let mut flipped = n4.clone();
        // flip the sign of the label at degree (1,1,0)
        let l = n4.component_labels(&deg(&[1, 1, 0])).start;
        let pairs: Vec<((u32, u32), Vec<(u32, f64)>)> =
            n4.brackets().map(|(&p, t)| (p, t.clone())).collect();
        for ((a, b), terms) in pairs {
            let s = |x: u32| if x == l { -1.0 } else { 1.0 };
            let t = terms.iter().map(|&(c, v)| (c, v * s(a) * s(b) * s(c))).collect();
            flipped.set_bracket(a, b, t).unwrap();
        }
        let signs = match_up_to_signs(&n4, &flipped, 1e-12).unwrap();
        // verify the reported signs reproduce the second algebra
        for (&(a, b), terms) in n4.brackets() {
            for &(c, v) in terms {
                let w = flipped.bracket(a, b)[0].1;
                let s = signs[a as usize] * signs[b as usize] * signs[c as usize];
                assert_eq!(v * s as f64, w);
            }
        }
        let mut broken = n4.clone();
        let e12 = n4.component_labels(&deg(&[1, 0, 0])).start;
        let e23 = n4.component_labels(&deg(&[0, 1, 0])).start;
        let e13 = n4.component_labels(&deg(&[1, 1, 0])).start;
        broken.set_bracket(e12, e23, vec![(e13, 2.0)]).unwrap();
        assert!(match_up_to_signs(&n4, &broken, 1e-12).is_err());
    }
}
