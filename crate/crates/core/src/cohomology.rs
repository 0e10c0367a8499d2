//! Harmonic (co)homology, cup products, and the Weyl-orbit description of
//! `H*(𝔫(n+1))`.
//!
//! Chains and cochains are identified through the orthonormal basis, so a
//! monomial cochain `c_{a₁}⋯c_{a_q}` is the wedge monomial `a₁∧…∧a_q` and the
//! cup product is the exterior product followed by harmonic projection.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use nalgebra::{DVector, SymmetricEigen};
use serde::Serialize;

use crate::cartan::{CartanMatrix, MultiDegree};
use crate::error::{Error, Result};
use crate::grading::{degree_order, wedge_basis, Bound, WedgeMonomial, DEFAULT_MAX_DEGREES};
use crate::liealg::{laplacian_matrix, Chain, GradedAlgebra};
use crate::oracles::interval_degree;
use crate::par;

/// Default tolerance for treating a Laplacian or eigenvalue as zero.
pub const HARMONIC_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyClass {
    pub k: MultiDegree,
    pub q: usize,
    pub representative: Chain,
}

impl CohomologyClass {
    /// The single monomial of the representative, if it has exactly one.
    pub fn monomial(&self, tol: f64) -> Option<(&WedgeMonomial, f64)> {
        let mut nz = self.representative.terms.iter().filter(|(_, x)| x.abs() > tol);
        let first = nz.next()?;
        if nz.next().is_some() {
            None
        } else {
            Some((first.0, *first.1))
        }
    }
}

/// Nonzero `k` inside `bound` with `E(k) = 0`.
pub fn harmonic_degrees(cm: &CartanMatrix, bound: &Bound) -> Result<Vec<MultiDegree>> {
    let order = degree_order(cm.rank(), bound, DEFAULT_MAX_DEGREES)?;
    let mut out = Vec::new();
    for k in order.degrees {
        if cm.energy(&k)? == 0 {
            out.push(k);
        }
    }
    Ok(out)
}

/// Orthonormal basis of `ker Δ_q` on `C_q^(k)`.
///
/// When `Δ_q` vanishes identically the wedge monomials themselves are
/// returned.
pub fn harmonic_basis(alg: &GradedAlgebra, k: &MultiDegree, q: usize, tol: f64) -> Result<Vec<CohomologyClass>> {
    if !alg.is_finalized(k) {
        return Err(Error::MissingComponent(k.clone()));
    }
    let basis = wedge_basis(alg, k, q)?;
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let lap = laplacian_matrix(alg, k, q)?.entries;
    let class = |c: Chain| CohomologyClass {
        k: k.clone(),
        q,
        representative: c,
    };
    if lap.iter().all(|x| x.abs() < tol) {
        return Ok(basis
            .monomials
            .iter()
            .map(|m| class(Chain::basis_element(k.clone(), q, m.clone())))
            .collect());
    }
    let eig = SymmetricEigen::new(lap);
    let mut out = Vec::new();
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v.abs() < tol.max(1e-6) {
            let mut u: DVector<f64> = eig.eigenvectors.column(i).into_owned();
            u.iter_mut().for_each(|x| {
                if x.abs() < 1e-13 {
                    *x = 0.0
                }
            });
            if let Some(p) = u.iter().find(|x| x.abs() > 1e-8) {
                if *p < 0.0 {
                    u *= -1.0;
                }
            }
            out.push(class(Chain::from_vector(&basis, &u)));
        }
    }
    Ok(out)
}

/// Number of harmonic classes per `(k, q)` for every listed degree.
pub fn class_counts(alg: &GradedAlgebra, degrees: &[MultiDegree], tol: f64) -> Result<Vec<(MultiDegree, usize, usize)>> {
    let per = par::try_map(degrees, |k| -> Result<Vec<(MultiDegree, usize, usize)>> {
        let mut v = Vec::new();
        for q in 1..=k.total() as usize {
            let n = harmonic_basis(alg, k, q, tol)?.len();
            if n > 0 {
                v.push((k.clone(), q, n));
            }
        }
        Ok(v)
    })?;
    Ok(per.into_iter().flatten().collect())
}

/// Cup product of two harmonic classes.
///
/// The wedge of two cocycles is a cocycle, so its harmonic projection is the
/// representative of the product class. Returns `None` for the zero class.
pub fn cup_product(
    alg: &GradedAlgebra,
    c1: &CohomologyClass,
    c2: &CohomologyClass,
    tol: f64,
) -> Result<Option<CohomologyClass>> {
    let k = c1.k.add(&c2.k);
    let q = c1.q + c2.q;
    if !alg.is_finalized(&k) {
        return Err(Error::OutOfBound(k));
    }
    let w = c1.representative.wedge(&c2.representative);
    if w.is_zero(tol) {
        return Ok(None);
    }
    let lap = laplacian_matrix(alg, &k, q)?.entries;
    if lap.iter().all(|x| x.abs() < tol) {
        return Ok(Some(CohomologyClass {
            k,
            q,
            representative: w,
        }));
    }
    let basis = wedge_basis(alg, &k, q)?;
    let v = w.to_vector(&basis);
    let mut proj = DVector::zeros(basis.len());
    for h in harmonic_basis(alg, &k, q, tol)? {
        let u = h.representative.to_vector(&basis);
        proj.axpy(u.dot(&v), &u, 1.0);
    }
    if proj.amax() < tol {
        return Ok(None);
    }
    Ok(Some(CohomologyClass {
        k,
        q,
        representative: Chain::from_vector(&basis, &proj),
    }))
}

/// `s_i(x)`: replaces `x_i` by `−x_i + x_{i−1} + x_{i+1} + 1`, with
/// `x₀ = x_{n+1} = 0`. `i` is 1-based.
pub fn weyl_reflection(i: usize, x: &[i64]) -> Result<Vec<i64>> {
    let n = x.len();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let at = |j: usize| if j == 0 || j > n { 0 } else { x[j - 1] };
    let mut y = x.to_vec();
    y[i - 1] = -at(i) + at(i - 1) + at(i + 1) + 1;
    Ok(y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPoint {
    pub x: Vec<i64>,
    pub length: usize,
    /// One-line notation of `σ` with `x = σ(0,…,0)`.
    pub permutation: Vec<usize>,
    /// Interval points `{i, j}` summing to `x`.
    pub decomposition: Vec<(usize, usize)>,
}

/// Breadth-first orbit of `0` under `s₁, …, s_n`, up to word length
/// `max_length`. Sorted by length, then by point.
pub fn weyl_orbit(n: usize, max_length: usize) -> Result<Vec<OrbitPoint>> {
    let start = vec![0i64; n];
    let mut seen: HashMap<Vec<i64>, (usize, Vec<usize>)> = HashMap::new();
    seen.insert(start.clone(), (0, (1..=n + 1).collect()));
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let (len, perm) = seen[&x].clone();
        if len >= max_length {
            continue;
        }
        for i in 1..=n {
            let y = weyl_reflection(i, &x)?;
            if seen.contains_key(&y) {
                continue;
            }
            let mut p = perm.clone();
            p.swap(i - 1, i);
            seen.insert(y.clone(), (len + 1, p));
            queue.push_back(y);
        }
    }
    let mut out = Vec::with_capacity(seen.len());
    for (x, (length, permutation)) in seen {
        let decomposition = interval_decomposition(&x)?;
        out.push(OrbitPoint {
            x,
            length,
            permutation,
            decomposition,
        });
    }
    out.sort_by(|a, b| (a.length, &a.x).cmp(&(b.length, &b.x)));
    Ok(out)
}

/// The unique set of distinct interval points `{i, j}` summing to `p`.
pub fn interval_decomposition(p: &[i64]) -> Result<Vec<(usize, usize)>> {
    let n = p.len();
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    // intervals are chosen in increasing order, so each set is visited once
    fn rec(
        rem: &mut Vec<i64>,
        used: &mut BTreeSet<(usize, usize)>,
        found: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if found.len() > 1 {
            return;
        }
        let Some(a) = rem.iter().position(|&v| v != 0) else {
            found.push(used.iter().copied().collect());
            return;
        };
        if rem[a] < 0 {
            return;
        }
        // an interval covering the leftmost nonzero entry must start there
        let i = a + 1;
        let n = rem.len();
        for j in (i + 1)..=(n + 1) {
            if rem[j - 2] <= 0 {
                break;
            }
            if used.last().is_some_and(|&last| last >= (i, j)) {
                continue;
            }
            for s in (i - 1)..(j - 1) {
                rem[s] -= 1;
            }
            used.insert((i, j));
            rec(rem, used, found);
            used.remove(&(i, j));
            for s in (i - 1)..(j - 1) {
                rem[s] += 1;
            }
        }
    }
    let mut rem = p.to_vec();
    if rem.iter().any(|&v| v < 0) || n == 0 && !p.is_empty() {
        return Err(Error::NoDecomposition(p.to_vec()));
    }
    rec(&mut rem, &mut BTreeSet::new(), &mut found);
    match found.len() {
        0 => Err(Error::NoDecomposition(p.to_vec())),
        1 => Ok(found.pop().expect("one")),
        _ => Err(Error::NonUniqueDecomposition(p.to_vec())),
    }
}

/// The monomial class `γ_σ` of an orbit point in `𝔫(n+1)`.
pub fn orbit_class(alg: &GradedAlgebra, point: &OrbitPoint) -> CohomologyClass {
    let rank = point.x.len();
    let labels: Vec<u32> = point
        .decomposition
        .iter()
        .map(|&(i, j)| alg.component_labels(&interval_degree(rank, i, j)).start)
        .collect();
    let representative = Chain::wedge_of_labels(alg, &labels);
    CohomologyClass {
        k: representative.k.clone(),
        q: representative.q,
        representative,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductRule {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `τ` with `γ_σ γ_σ' = ±γ_τ`, or `None` for a zero product.
    pub result: Option<Vec<usize>>,
}

/// Products of all pairs of positive-degree classes of `𝔫(n+1)` predicted by
/// the disjoint-decomposition rule.
pub fn product_table(n: usize) -> Result<Vec<ProductRule>> {
    let orbit = weyl_orbit(n, usize::MAX)?;
    let by_point: BTreeMap<&Vec<i64>, &OrbitPoint> = orbit.iter().map(|p| (&p.x, p)).collect();
    let positive: Vec<&OrbitPoint> = orbit.iter().filter(|p| p.length > 0).collect();
    let mut out = Vec::new();
    for (a, p) in positive.iter().enumerate() {
        for r in &positive[a..] {
            let sp: BTreeSet<_> = p.decomposition.iter().collect();
            let disjoint = r.decomposition.iter().all(|d| !sp.contains(d));
            let sum: Vec<i64> = p.x.iter().zip(&r.x).map(|(u, v)| u + v).collect();
            let result = if disjoint {
                by_point.get(&sum).map(|t| t.permutation.clone())
            } else {
                None
            };
            out.push(ProductRule {
                left: p.permutation.clone(),
                right: r.permutation.clone(),
                result,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCheck {
    pub rule: ProductRule,
    /// Coefficient of `γ_τ` in the computed product (0 for a zero product).
    pub coefficient: f64,
    pub agrees: bool,
}

/// Checks [`product_table`] against [`cup_product`] on `𝔫(n+1)`.
pub fn verify_product_table(alg: &GradedAlgebra, n: usize, tol: f64) -> Result<Vec<ProductCheck>> {
    let orbit = weyl_orbit(n, usize::MAX)?;
    let by_perm: HashMap<&Vec<usize>, &OrbitPoint> = orbit.iter().map(|p| (&p.permutation, p)).collect();
    let rules = product_table(n)?;
    par::try_map(&rules, |rule| -> Result<ProductCheck> {
        let c1 = orbit_class(alg, by_perm[&rule.left]);
        let c2 = orbit_class(alg, by_perm[&rule.right]);
        let prod = cup_product(alg, &c1, &c2, tol)?;
        let (coefficient, agrees) = match (&prod, &rule.result) {
            (None, None) => (0.0, true),
            (Some(_), None) => (f64::NAN, false),
            (None, Some(_)) => (0.0, false),
            (Some(c), Some(t)) => {
                let target = orbit_class(alg, by_perm[t]);
                let (m, _) = target.monomial(tol).expect("monomial class");
                let x = c.representative.terms.get(m).copied().unwrap_or(0.0);
                let rest = c
                    .representative
                    .terms
                    .iter()
                    .filter(|(mm, _)| *mm != m)
                    .all(|(_, v)| v.abs() < tol);
                (x, rest && (x.abs() - 1.0).abs() < tol)
            }
        };
        Ok(ProductCheck {
            rule: rule.clone(),
            coefficient,
            agrees,
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductProbe {
    pub classes: usize,
    pub pairs: usize,
    pub nonzero: Vec<(MultiDegree, usize, MultiDegree, usize)>,
}

/// Samples cup products of harmonic classes whose product degree still lies
/// in the finalized part of `alg`.
pub fn probe_products(alg: &GradedAlgebra, cm: &CartanMatrix, bound: &Bound, tol: f64) -> Result<ProductProbe> {
    let degrees = harmonic_degrees(cm, bound)?;
    let mut classes = Vec::new();
    for k in &degrees {
        for q in 1..=k.total() as usize {
            classes.extend(harmonic_basis(alg, k, q, tol)?);
        }
    }
    let mut pairs = Vec::new();
    for a in 0..classes.len() {
        for b in a..classes.len() {
            if bound.contains(&classes[a].k.add(&classes[b].k)) {
                pairs.push((a, b));
            }
        }
    }
    let results = par::try_map(&pairs, |&(a, b)| cup_product(alg, &classes[a], &classes[b], tol))?;
    let nonzero = pairs
        .iter()
        .zip(&results)
        .filter(|(_, r)| r.is_some())
        .map(|(&(a, b), _)| (classes[a].k.clone(), classes[a].q, classes[b].k.clone(), classes[b].q))
        .collect();
    Ok(ProductProbe {
        classes: classes.len(),
        pairs: pairs.len(),
        nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::upper_triangular;

    fn deg(k: &[u32]) -> MultiDegree {
        MultiDegree(k.to_vec())
    }

    #[test]
    fn harmonic_degrees_a2() {
        let d = harmonic_degrees(&CartanMatrix::a2(), &Bound::componentwise(deg(&[3, 3]))).unwrap();
        let got: Vec<Vec<u32>> = d.into_iter().map(|k| k.0).collect();
        assert_eq!(got, vec![vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn harmonic_degrees_g2() {
        let d = harmonic_degrees(&CartanMatrix::g2(), &Bound::componentwise(deg(&[4, 6]))).unwrap();
        let got: Vec<Vec<u32>> = d.into_iter().map(|k| k.0).collect();
        assert_eq!(
            got,
            vec![vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 4], vec![4, 4], vec![2, 6]]
        );
    }

    #[test]
    fn n3_classes() {
        let n3 = upper_triangular(3);
        let c = harmonic_basis(&n3, &deg(&[2, 1]), 2, HARMONIC_TOL).unwrap();
        assert_eq!(c.len(), 1);
        let (m, x) = c[0].monomial(1e-12).unwrap();
        assert_eq!(m.0, vec![0, 2]);
        assert_eq!(x, 1.0);
        assert!(harmonic_basis(&n3, &deg(&[1, 1]), 1, HARMONIC_TOL).unwrap().is_empty());
        let g = harmonic_basis(&n3, &deg(&[1, 0]), 1, HARMONIC_TOL).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn reflections() {
        assert_eq!(weyl_reflection(1, &[0, 0]).unwrap(), vec![1, 0]);
        assert_eq!(weyl_reflection(2, &[1, 0]).unwrap(), vec![1, 2]);
        for x in [[0, 0], [1, 2], [3, -1]] {
            for i in 1..=2 {
                let y = weyl_reflection(i, &x).unwrap();
                assert_eq!(weyl_reflection(i, &y).unwrap(), x.to_vec());
            }
        }
        assert!(matches!(weyl_reflection(3, &[0, 0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn orbits() {
        let o1 = weyl_orbit(1, 10).unwrap();
        assert_eq!(o1.iter().map(|p| p.x.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        let o2 = weyl_orbit(2, 10).unwrap();
        assert_eq!(o2.len(), 6);
        let find = |x: &[i64]| o2.iter().find(|p| p.x == x).unwrap().permutation.clone();
        assert_eq!(find(&[1, 0]), vec![2, 1, 3]);
        assert_eq!(find(&[0, 1]), vec![1, 3, 2]);
        assert_eq!(find(&[1, 2]), vec![2, 3, 1]);
        assert_eq!(find(&[2, 1]), vec![3, 1, 2]);
        assert_eq!(find(&[2, 2]), vec![3, 2, 1]);
        assert_eq!(weyl_orbit(3, 10).unwrap().len(), 24);
        assert_eq!(weyl_orbit(3, 1).unwrap().len(), 4);
    }

    #[test]
    fn decompositions() {
        assert_eq!(interval_decomposition(&[1, 2]).unwrap(), vec![(1, 3), (2, 3)]);
        assert_eq!(interval_decomposition(&[1, 0]).unwrap(), vec![(1, 2)]);
        assert_eq!(interval_decomposition(&[2, 2]).unwrap(), vec![(1, 2), (1, 3), (2, 3)]);
        assert!(matches!(interval_decomposition(&[3, 0]), Err(Error::NoDecomposition(_))));
        // (1,1) = {1,3} = {1,2}+{2,3}
        assert!(matches!(interval_decomposition(&[1, 1]), Err(Error::NonUniqueDecomposition(_))));
    }

    #[test]
    fn n3_product_table() {
        let rules = product_table(2).unwrap();
        let nonzero: Vec<&ProductRule> = rules.iter().filter(|r| r.result.is_some()).collect();
        assert_eq!(nonzero.len(), 2);
        let n3 = upper_triangular(3);
        assert!(verify_product_table(&n3, 2, HARMONIC_TOL).unwrap().iter().all(|c| c.agrees));
    }

    #[test]
    fn squares_vanish() {
        let n3 = upper_triangular(3);
        let g = harmonic_basis(&n3, &deg(&[1, 0]), 1, HARMONIC_TOL).unwrap();
        assert!(cup_product(&n3, &g[0], &g[0], HARMONIC_TOL).unwrap().is_none());
    }

    #[test]
    fn out_of_bound_product() {
        let l = crate::oracles::l1_algebra(3);
        let g = harmonic_basis(&l, &deg(&[2]), 1, HARMONIC_TOL).unwrap();
        assert_eq!(g.len(), 1);
        assert!(matches!(cup_product(&l, &g[0], &g[0], HARMONIC_TOL), Err(Error::OutOfBound(_))));
    }
}
