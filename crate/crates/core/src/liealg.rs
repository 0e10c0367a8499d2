//! Graded Euclidean Lie algebras given by structure constants, and the
//! boundary, coboundary and Laplace operators of their chain complexes.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cartan::{CartanMatrix, MultiDegree};
use crate::construct::DegreeRecord;
use crate::error::{Error, Result};
use crate::grading::{wedge_basis, wedge_basis_capped, ChainBasis, WedgeMonomial};
use crate::par;

/// Coefficients whose magnitude falls below this are not stored.
pub const ZERO_COEFF: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub dim: usize,
    pub first: u32,
}

impl Component {
    pub fn labels(&self) -> Range<u32> {
        self.first..self.first + self.dim as u32
    }
}

/// A positively graded Lie algebra with a declared orthonormal basis in
/// every component.
///
/// Labels are numbered globally in degree order (see [`MultiDegree`]'s
/// `Ord`), then by position inside the component.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    name: String,
    rank: usize,
    labels: Vec<MultiDegree>,
    components: BTreeMap<MultiDegree, Component>,
    // keyed by (a, b) with a < b
    brackets: BTreeMap<(u32, u32), Vec<(u32, f64)>>,
    // every degree without a listed component is zero
    closed: bool,
}

impl GradedAlgebra {
    pub fn new(name: impl Into<String>, rank: usize) -> Self {
        GradedAlgebra {
            name: name.into(),
            rank,
            labels: Vec::new(),
            components: BTreeMap::new(),
            brackets: BTreeMap::new(),
            closed: false,
        }
    }

    /// Declares every degree without a listed component to be zero
    /// (finite-dimensional algebras).
    pub fn close(&mut self) {
        self.closed = true;
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Adds zero components for every degree in `bound` that has none yet.
    pub fn finalize_bound(&mut self, bound: &crate::grading::Bound) -> Result<()> {
        let order = crate::grading::degree_order(self.rank, bound, crate::grading::DEFAULT_MAX_DEGREES)?;
        for k in order.degrees {
            if !self.components.contains_key(&k) {
                self.components.insert(k, Component { dim: 0, first: self.labels.len() as u32 });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn label_degree(&self, l: u32) -> &MultiDegree {
        &self.labels[l as usize]
    }

    /// Finalizes the component at `k` with `dim` new labels.
    pub fn add_component(&mut self, k: MultiDegree, dim: usize) -> Result<Range<u32>> {
        if k.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: k.rank(),
            });
        }
        if k.is_zero() {
            return Err(Error::Format("the zero degree carries no component".into()));
        }
        if self.components.contains_key(&k) {
            return Err(Error::Format(format!("component {k} already finalized")));
        }
        if dim > 0 {
            if let Some(last) = self.labels.last() {
                if *last >= k {
                    return Err(Error::Format(format!(
                        "component {k} added after {last}; components must follow degree order"
                    )));
                }
            }
        }
        let first = self.labels.len() as u32;
        self.labels.extend(std::iter::repeat_n(k.clone(), dim));
        self.components.insert(k, Component { dim, first });
        Ok(first..first + dim as u32)
    }

    pub fn is_finalized(&self, k: &MultiDegree) -> bool {
        k.is_zero() || self.closed || self.components.contains_key(k)
    }

    pub fn component(&self, k: &MultiDegree) -> Option<&Component> {
        self.components.get(k)
    }

    pub fn dim(&self, k: &MultiDegree) -> Option<usize> {
        self.components.get(k).map(|c| c.dim)
    }

    pub fn component_labels(&self, k: &MultiDegree) -> Range<u32> {
        self.components.get(k).map_or(0..0, Component::labels)
    }

    /// All finalized components (including zero-dimensional ones) in degree order.
    pub fn components(&self) -> impl Iterator<Item = (&MultiDegree, &Component)> {
        self.components.iter()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.len()
    }

    pub(crate) fn labels_with_total_at_most(&self, t: u32) -> impl Iterator<Item = u32> {
        let end = self.labels.partition_point(|k| k.total() <= t);
        0..end as u32
    }

    /// Sets `[a, b] = Σ coeff·c`. Entries for `(b, a)` are implied by
    /// antisymmetry. Every target must have degree `deg a + deg b`.
    pub fn set_bracket(&mut self, a: u32, b: u32, terms: Vec<(u32, f64)>) -> Result<()> {
        if a == b {
            if terms.iter().any(|t| t.1.abs() > ZERO_COEFF) {
                return Err(Error::Format(format!("[{a},{a}] must vanish")));
            }
            return Ok(());
        }
        let n = self.labels.len() as u32;
        if a >= n || b >= n {
            return Err(Error::Format(format!("bracket label out of range: ({a},{b})")));
        }
        let target = self.label_degree(a).add(self.label_degree(b));
        let mut merged: BTreeMap<u32, f64> = BTreeMap::new();
        for (c, x) in terms {
            if c >= n || self.labels[c as usize] != target {
                return Err(Error::Format(format!(
                    "bracket [{a},{b}] has a term outside degree {target}"
                )));
            }
            *merged.entry(c).or_default() += x;
        }
        let sign = if a < b { 1.0 } else { -1.0 };
        let stored: Vec<(u32, f64)> = merged
            .into_iter()
            .filter(|(_, x)| x.abs() > ZERO_COEFF)
            .map(|(c, x)| (c, sign * x))
            .collect();
        let key = (a.min(b), a.max(b));
        if stored.is_empty() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, stored);
        }
        Ok(())
    }

    /// `[a, b]` for `a < b`, as a sparse list.
    pub fn bracket_ordered(&self, a: u32, b: u32) -> &[(u32, f64)] {
        debug_assert!(a < b);
        self.brackets.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// `[a, b]` for any pair.
    pub fn bracket(&self, a: u32, b: u32) -> Vec<(u32, f64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.bracket_ordered(a, b).to_vec(),
            std::cmp::Ordering::Greater => self
                .bracket_ordered(b, a)
                .iter()
                .map(|&(c, x)| (c, -x))
                .collect(),
            std::cmp::Ordering::Equal => vec![],
        }
    }

    pub fn brackets(&self) -> impl Iterator<Item = (&(u32, u32), &Vec<(u32, f64)>)> {
        self.brackets.iter()
    }

    /// Bracket of two homogeneous 1-chains.
    pub fn bracket_chains(&self, x: &Chain, y: &Chain) -> Result<Chain> {
        if x.q != 1 || y.q != 1 {
            return Err(Error::Format("bracket_chains expects 1-chains".into()));
        }
        let k = x.k.add(&y.k);
        let mut out = Chain::zero(k, 1);
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                for (c, v) in self.bracket(mx.0[0], my.0[0]) {
                    out.add_term(WedgeMonomial(vec![c]), cx * cy * v);
                }
            }
        }
        Ok(out)
    }

    /// The element `e_i` of a unit-degree component (first label there).
    pub fn generator(&self, i: usize) -> Result<Chain> {
        let k = MultiDegree::unit(self.rank, i);
        let labels = self.component_labels(&k);
        if labels.is_empty() {
            return Err(Error::MissingComponent(k));
        }
        Ok(Chain::basis_element(k, 1, WedgeMonomial(vec![labels.start])))
    }
}

/// A homogeneous chain in `C_q^(k)`, stored sparsely by monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub k: MultiDegree,
    pub q: usize,
    pub terms: BTreeMap<WedgeMonomial, f64>,
}

/// Sign of the permutation sorting `factors`, or `None` if it has a repeat.
pub(crate) fn sort_with_sign(factors: &mut [u32]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 && factors[j - 1] > factors[j] {
            factors.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if factors.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl Chain {
    pub fn zero(k: MultiDegree, q: usize) -> Self {
        Chain {
            k,
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis_element(k: MultiDegree, q: usize, m: WedgeMonomial) -> Self {
        let mut c = Chain::zero(k, q);
        c.terms.insert(m, 1.0);
        c
    }

    /// `x₁ ∧ … ∧ x_q` for labels in any order; zero on a repeated label.
    pub fn wedge_of_labels(alg: &GradedAlgebra, labels: &[u32]) -> Self {
        let mut f = labels.to_vec();
        let k = f
            .iter()
            .fold(MultiDegree::zero(alg.rank()), |acc, &l| acc.add(alg.label_degree(l)));
        let q = f.len();
        let mut c = Chain::zero(k, q);
        if let Some(sign) = sort_with_sign(&mut f) {
            c.terms.insert(WedgeMonomial(f), sign);
        }
        c
    }

    pub fn add_term(&mut self, m: WedgeMonomial, x: f64) {
        let e = self.terms.entry(m).or_default();
        *e += x;
    }

    pub fn scale(&mut self, s: f64) {
        for v in self.terms.values_mut() {
            *v *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, s: f64) {
        debug_assert!(self.k == other.k && self.q == other.q);
        for (m, x) in &other.terms {
            self.add_term(m.clone(), s * x);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |a, x| a.max(x.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn to_vector(&self, basis: &ChainBasis) -> DVector<f64> {
        let mut v = DVector::zeros(basis.len());
        for (m, x) in &self.terms {
            let i = basis
                .position(&m.0)
                .expect("chain monomial missing from its degree's basis");
            v[i] += x;
        }
        v
    }

    pub fn from_vector(basis: &ChainBasis, v: &DVector<f64>) -> Self {
        let mut c = Chain::zero(basis.k.clone(), basis.q);
        for (i, m) in basis.monomials.iter().enumerate() {
            if v[i] != 0.0 {
                c.terms.insert(m.clone(), v[i]);
            }
        }
        c
    }

    /// Exterior product `self ∧ other`.
    pub fn wedge(&self, other: &Chain) -> Chain {
        let mut out = Chain::zero(self.k.add(&other.k), self.q + other.q);
        for (ma, xa) in &self.terms {
            for (mb, xb) in &other.terms {
                if let Some((m, sign)) = merge_monomials(&ma.0, &mb.0) {
                    out.add_term(m, sign * xa * xb);
                }
            }
        }
        out
    }
}

/// Merges two sorted label tuples, returning the sorted union and the sign of
/// the shuffle, or `None` if they share a label.
pub(crate) fn merge_monomials(a: &[u32], b: &[u32]) -> Option<(WedgeMonomial, f64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining a's
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    let sign = if inversions.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((WedgeMonomial(out), sign))
}

/// Matrix of `∂ : C_q → C_{q−1}` between two bases of the same degree, with
/// `∂(x₁∧…∧x_q) = Σ_{ℓ<m} (−1)^{ℓ+m+1} [x_ℓ,x_m] ∧ x₁ ∧ … x̂_ℓ … x̂_m … ∧ x_q`
/// (positions counted from 1), so that `∂(x∧y) = [x,y]`.
pub fn boundary_between(alg: &GradedAlgebra, upper: &ChainBasis, lower: &ChainBasis) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(lower.len(), upper.len());
    if upper.q < 2 || lower.is_empty() {
        return d;
    }
    let columns = par::map(&upper.monomials, |x| boundary_column(alg, &x.0, lower));
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col {
            d[(i, j)] += v;
        }
    }
    d
}

fn boundary_column(alg: &GradedAlgebra, x: &[u32], lower: &ChainBasis) -> Vec<(usize, f64)> {
    let q = x.len();
    let mut out = Vec::new();
    let mut rest = Vec::with_capacity(q - 1);
    for l in 0..q {
        for m in (l + 1)..q {
            let terms = alg.bracket_ordered(x[l], x[m]);
            if terms.is_empty() {
                continue;
            }
            let sign0 = if (l + m) % 2 == 0 { -1.0 } else { 1.0 };
            rest.clear();
            rest.extend(
                x.iter()
                    .enumerate()
                    .filter(|&(p, _)| p != l && p != m)
                    .map(|(_, &v)| v),
            );
            for &(z, c) in terms {
                let pos = rest.partition_point(|&v| v < z);
                if pos < rest.len() && rest[pos] == z {
                    continue;
                }
                let sign = if pos % 2 == 0 { sign0 } else { -sign0 };
                let mut mono = rest.clone();
                mono.insert(pos, z);
                let i = lower
                    .position(&mono)
                    .expect("boundary term outside the lower basis");
                out.push((i, sign * c));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Boundary,
    Coboundary,
    Laplacian,
}

#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub k: MultiDegree,
    pub q: usize,
    pub kind: OperatorKind,
    pub entries: DMatrix<f64>,
}

/// All chain spaces and boundary maps in one multidegree.
#[derive(Clone, Debug)]
pub struct DegreeComplex {
    pub k: MultiDegree,
    pub bases: Vec<ChainBasis>,
    // boundaries[q] : C_q → C_{q-1}; boundaries[0] is 0×dim C_0
    boundaries: Vec<DMatrix<f64>>,
}

impl DegreeComplex {
    pub fn new(alg: &GradedAlgebra, k: &MultiDegree) -> Result<Self> {
        Self::with_cap(alg, k, usize::MAX)
    }

    /// Like [`DegreeComplex::new`] but fails once a chain space exceeds `cap`.
    pub fn with_cap(alg: &GradedAlgebra, k: &MultiDegree, cap: usize) -> Result<Self> {
        let qmax = (k.total() as usize).min(alg.num_labels());
        let mut bases = Vec::with_capacity(qmax + 1);
        for q in 0..=qmax {
            bases.push(wedge_basis_capped(alg, k, q, cap)?);
        }
        while bases.len() > 1 && bases.last().is_some_and(ChainBasis::is_empty) {
            bases.pop();
        }
        let mut boundaries = vec![DMatrix::zeros(0, bases[0].len())];
        for q in 1..bases.len() {
            boundaries.push(boundary_between(alg, &bases[q], &bases[q - 1]));
        }
        Ok(DegreeComplex {
            k: k.clone(),
            bases,
            boundaries,
        })
    }

    /// Highest `q` with a (possibly) nonempty chain space.
    pub fn qmax(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.bases.get(q).map_or(0, ChainBasis::len)
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(ChainBasis::len).sum()
    }

    pub fn basis(&self, q: usize) -> Option<&ChainBasis> {
        self.bases.get(q)
    }

    /// `∂_q`, shape `dim C_{q−1} × dim C_q`.
    pub fn boundary(&self, q: usize) -> DMatrix<f64> {
        if q < self.boundaries.len() {
            self.boundaries[q].clone()
        } else {
            DMatrix::zeros(self.dim(q.saturating_sub(1)), self.dim(q))
        }
    }

    /// `δ_q = ∂_{q+1}ᵀ`, shape `dim C_{q+1} × dim C_q`.
    pub fn coboundary(&self, q: usize) -> DMatrix<f64> {
        self.boundary(q + 1).transpose()
    }

    /// `Δ_q = ∂_{q+1}∂_{q+1}ᵀ + ∂_qᵀ∂_q`.
    pub fn laplacian(&self, q: usize) -> DMatrix<f64> {
        let n = self.dim(q);
        let mut lap = DMatrix::zeros(n, n);
        if n == 0 {
            return lap;
        }
        let up = self.boundary(q + 1);
        if up.ncols() > 0 {
            lap += &up * up.transpose();
        }
        if q >= 1 {
            let down = self.boundary(q);
            if down.nrows() > 0 {
                lap += down.transpose() * &down;
            }
        }
        lap
    }

    /// Applies `Δ` to a chain of this degree.
    pub fn apply_laplacian(&self, c: &Chain) -> Chain {
        let basis = match self.basis(c.q) {
            Some(b) => b,
            None => return Chain::zero(c.k.clone(), c.q),
        };
        let v = c.to_vector(basis);
        Chain::from_vector(basis, &(self.laplacian(c.q) * v))
    }
}

pub fn boundary_matrix(alg: &GradedAlgebra, k: &MultiDegree, q: usize) -> Result<OperatorMatrix> {
    if q == 0 {
        return Err(Error::Format("boundary is defined for q >= 1".into()));
    }
    let upper = wedge_basis(alg, k, q)?;
    let lower = wedge_basis(alg, k, q - 1)?;
    Ok(OperatorMatrix {
        k: k.clone(),
        q,
        kind: OperatorKind::Boundary,
        entries: boundary_between(alg, &upper, &lower),
    })
}

pub fn coboundary_matrix(alg: &GradedAlgebra, k: &MultiDegree, q: usize) -> Result<OperatorMatrix> {
    let b = boundary_matrix(alg, k, q + 1)?;
    Ok(OperatorMatrix {
        k: k.clone(),
        q,
        kind: OperatorKind::Coboundary,
        entries: b.entries.transpose(),
    })
}

pub fn laplacian_matrix(alg: &GradedAlgebra, k: &MultiDegree, q: usize) -> Result<OperatorMatrix> {
    let mut bases = Vec::with_capacity(3);
    for p in [q.checked_sub(1), Some(q), Some(q + 1)].into_iter().flatten() {
        bases.push((p, wedge_basis(alg, k, p)?));
    }
    let find = |p: usize| bases.iter().find(|(x, _)| *x == p).map(|(_, b)| b);
    let mid = find(q).expect("q basis present");
    let n = mid.len();
    let mut lap = DMatrix::zeros(n, n);
    let up = boundary_between(alg, find(q + 1).expect("q+1 basis present"), mid);
    if up.ncols() > 0 && n > 0 {
        lap += &up * up.transpose();
    }
    if let Some(low) = q.checked_sub(1).and_then(find) {
        let down = boundary_between(alg, mid, low);
        if down.nrows() > 0 && n > 0 {
            lap += down.transpose() * &down;
        }
    }
    Ok(OperatorMatrix {
        k: k.clone(),
        q,
        kind: OperatorKind::Laplacian,
        entries: lap,
    })
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// `max |Δ_q − λ·Id|` on `C_q^(k)`.
pub fn check_scalarity(alg: &GradedAlgebra, k: &MultiDegree, q: usize, lambda: f64) -> Result<f64> {
    let lap = laplacian_matrix(alg, k, q)?.entries;
    Ok(scalar_residual(&lap, lambda))
}

pub fn scalar_residual(lap: &DMatrix<f64>, lambda: f64) -> f64 {
    let n = lap.nrows();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { lambda } else { 0.0 };
            r = r.max((lap[(i, j)] - target).abs());
        }
    }
    r
}

/// `max |∂₂∘∂₃|` on `C₃^(k)`; zero iff the Jacobi identity holds in degree `k`.
pub fn check_jacobi(alg: &GradedAlgebra, k: &MultiDegree) -> Result<f64> {
    let c1 = wedge_basis(alg, k, 1)?;
    let c2 = wedge_basis(alg, k, 2)?;
    let c3 = wedge_basis(alg, k, 3)?;
    if c1.is_empty() || c3.is_empty() {
        return Ok(0.0);
    }
    let d2 = boundary_between(alg, &c2, &c1);
    let d3 = boundary_between(alg, &c3, &c2);
    Ok(max_abs(&(d2 * d3)))
}

/// Residual of the order-two identity
///
/// ```text
/// Δ(c₁c₂c₃) = Δ(c₁c₂)c₃ + (−1)^{d₂d₃}Δ(c₁c₃)c₂ + (−1)^{d₁(d₂+d₃)}Δ(c₂c₃)c₁
///           − Δ(c₁)c₂c₃ − (−1)^{d₁d₂}Δ(c₂)c₁c₃ − (−1)^{(d₁+d₂)d₃}Δ(c₃)c₁c₂
/// ```
///
/// for homogeneous chains (products are wedge products).
pub fn check_order_two(alg: &GradedAlgebra, c1: &Chain, c2: &Chain, c3: &Chain) -> Result<f64> {
    let mut cache: HashMap<MultiDegree, DegreeComplex> = HashMap::new();
    let mut lap = |c: &Chain| -> Result<Chain> {
        if c.k.is_zero() {
            return Ok(Chain::zero(c.k.clone(), c.q));
        }
        if !cache.contains_key(&c.k) {
            if !alg.is_finalized(&c.k) {
                return Err(Error::MissingComponent(c.k.clone()));
            }
            cache.insert(c.k.clone(), DegreeComplex::new(alg, &c.k)?);
        }
        Ok(cache[&c.k].apply_laplacian(c))
    };
    let sgn = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (d1, d2, d3) = (c1.q, c2.q, c3.q);

    let c123 = c1.wedge(c2).wedge(c3);
    let lhs = lap(&c123)?;

    let mut rhs = Chain::zero(c123.k.clone(), c123.q);
    rhs.add_scaled(&lap(&c1.wedge(c2))?.wedge(c3), 1.0);
    rhs.add_scaled(&lap(&c1.wedge(c3))?.wedge(c2), sgn(d2 * d3));
    rhs.add_scaled(&lap(&c2.wedge(c3))?.wedge(c1), sgn(d1 * (d2 + d3)));
    rhs.add_scaled(&lap(c1)?.wedge(c2).wedge(c3), -1.0);
    rhs.add_scaled(&lap(c2)?.wedge(c1).wedge(c3), -sgn(d1 * d2));
    rhs.add_scaled(&lap(c3)?.wedge(c1).wedge(c2), -sgn((d1 + d2) * d3));

    let mut diff = lhs;
    diff.add_scaled(&rhs, -1.0);
    Ok(diff.max_abs())
}

/// `(ad e_i)^m e_j` as a 1-chain in degree `m·δ_i + δ_j`.
pub fn ad_power(alg: &GradedAlgebra, i: usize, j: usize, m: u32) -> Result<Chain> {
    let n = alg.rank();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange {
                index: idx + 1,
                max: n,
            });
        }
    }
    let ei = alg.generator(i)?;
    let mut x = alg.generator(j)?;
    for _ in 0..m {
        let target = ei.k.add(&x.k);
        if !alg.is_finalized(&target) {
            return Err(Error::MissingComponent(target));
        }
        x = alg.bracket_chains(&ei, &x)?;
    }
    Ok(x)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coeff(pub f64);

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = serde_json::value::RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Coeff)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentDoc {
    pub degree: MultiDegree,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermDoc {
    pub c: u32,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketDoc {
    pub a: u32,
    pub b: u32,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CartanDoc {
    pub matrix: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

/// JSON dump of an algebra. Labels are numbered consecutively through the
/// listed components.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDump {
    pub name: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<CartanDoc>,
    pub components: Vec<ComponentDoc>,
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<DegreeRecord>>,
}

impl AlgebraDump {
    pub fn from_algebra(alg: &GradedAlgebra, cartan: Option<&CartanMatrix>) -> Self {
        AlgebraDump {
            name: alg.name.clone(),
            rank: alg.rank,
            closed: alg.closed,
            cartan: cartan.map(|cm| CartanDoc {
                matrix: cm.entries().to_vec(),
                d: cm.symmetrizer().to_vec(),
            }),
            components: alg
                .components
                .iter()
                .map(|(k, c)| ComponentDoc {
                    degree: k.clone(),
                    dim: c.dim,
                })
                .collect(),
            brackets: alg
                .brackets
                .iter()
                .map(|(&(a, b), terms)| BracketDoc {
                    a,
                    b,
                    terms: terms
                        .iter()
                        .map(|&(c, x)| TermDoc { c, coeff: Coeff(x) })
                        .collect(),
                })
                .collect(),
            provenance: None,
        }
    }

    pub fn to_algebra(&self) -> Result<GradedAlgebra> {
        let mut alg = GradedAlgebra::new(self.name.clone(), self.rank);
        let mut comps = self.components.clone();
        comps.sort_by(|a, b| a.degree.cmp(&b.degree));
        for c in comps {
            alg.add_component(c.degree, c.dim)?;
        }
        for b in &self.brackets {
            alg.set_bracket(b.a, b.b, b.terms.iter().map(|t| (t.c, t.coeff.0)).collect())?;
        }
        if self.closed {
            alg.close();
        }
        Ok(alg)
    }

    pub fn cartan_matrix(&self) -> Result<Option<CartanMatrix>> {
        self.cartan
            .as_ref()
            .map(|c| CartanMatrix::validate(c.matrix.clone()))
            .transpose()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
