//! Degree enumeration and wedge-monomial bases of the chain spaces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cartan::MultiDegree;
use crate::error::{Error, Result};
use crate::liealg::GradedAlgebra;

/// Default cap on the number of degrees an enumeration may produce.
pub const DEFAULT_MAX_DEGREES: usize = 2_000_000;

/// Downward-closed region of degrees: a total-degree bound, a componentwise
/// bound, or both (intersection).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub total: Option<u32>,
    pub componentwise: Option<MultiDegree>,
}

impl Bound {
    pub fn total(n: u32) -> Self {
        Bound {
            total: Some(n),
            componentwise: None,
        }
    }

    pub fn componentwise(k: MultiDegree) -> Self {
        Bound {
            total: None,
            componentwise: Some(k),
        }
    }

    pub fn contains(&self, k: &MultiDegree) -> bool {
        self.total.is_none_or(|t| k.total() <= t)
            && self.componentwise.as_ref().is_none_or(|b| k.le(b))
    }

    fn per_coordinate_max(&self, n: usize) -> Result<Vec<u32>> {
        match (&self.componentwise, self.total) {
            (Some(b), t) => {
                if b.rank() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: b.rank(),
                    });
                }
                Ok(b.0.iter().map(|&x| t.map_or(x, |t| x.min(t))).collect())
            }
            (None, Some(t)) => Ok(vec![t; n]),
            (None, None) => Err(Error::Format("bound has neither a total nor a componentwise limit".into())),
        }
    }
}

/// Topologically sorted list of all nonzero degrees inside a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOrder {
    pub degrees: Vec<MultiDegree>,
}

/// Enumerates `0 ≺ k` within `bound`, sorted by total degree and then
/// reverse-lexicographically.
pub fn degree_order(n: usize, bound: &Bound, max_degrees: usize) -> Result<DegreeOrder> {
    let maxes = bound.per_coordinate_max(n)?;
    let mut degrees = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(
        i: usize,
        maxes: &[u32],
        current: &mut Vec<u32>,
        bound: &Bound,
        out: &mut Vec<MultiDegree>,
        cap: usize,
    ) -> Result<()> {
        if i == maxes.len() {
            let k = MultiDegree(current.clone());
            if !k.is_zero() && bound.contains(&k) {
                if out.len() >= cap {
                    return Err(Error::BoundTooLarge {
                        count: out.len() + 1,
                        cap,
                    });
                }
                out.push(k);
            }
            return Ok(());
        }
        let used: u32 = current[..i].iter().sum();
        for v in 0..=maxes[i] {
            if bound.total.is_some_and(|t| used + v > t) {
                break;
            }
            current[i] = v;
            rec(i + 1, maxes, current, bound, out, cap)?;
        }
        current[i] = 0;
        Ok(())
    }
    rec(0, &maxes, &mut current, bound, &mut degrees, max_degrees)?;
    degrees.sort();
    Ok(DegreeOrder { degrees })
}

/// Strictly increasing tuple of global label indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WedgeMonomial(pub Vec<u32>);

impl WedgeMonomial {
    pub fn degree(&self, alg: &GradedAlgebra) -> MultiDegree {
        let mut k = MultiDegree::zero(alg.rank());
        for &l in &self.0 {
            k = k.add(alg.label_degree(l));
        }
        k
    }
}

/// Declared-orthonormal basis of `(Λ^q g)^(k)` in lexicographic order.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    pub k: MultiDegree,
    pub q: usize,
    pub monomials: Vec<WedgeMonomial>,
    index: HashMap<Vec<u32>, usize>,
}

impl ChainBasis {
    pub fn new(k: MultiDegree, q: usize, monomials: Vec<WedgeMonomial>) -> Self {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.0.clone(), i))
            .collect();
        ChainBasis {
            k,
            q,
            monomials,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, factors: &[u32]) -> Option<usize> {
        self.index.get(factors).copied()
    }
}

/// Checks that every nonzero `j ≺ k` (and `k` itself when `include_k`) is a
/// finalized component of `alg`.
pub(crate) fn require_below(alg: &GradedAlgebra, k: &MultiDegree, include_k: bool) -> Result<()> {
    for j in k.nonzero_predecessors() {
        if (include_k || &j != k) && !alg.is_finalized(&j) {
            return Err(Error::MissingComponent(j));
        }
    }
    Ok(())
}

/// Enumerates the wedge basis of `(Λ^q g)^(k)`.
pub fn wedge_basis(alg: &GradedAlgebra, k: &MultiDegree, q: usize) -> Result<ChainBasis> {
    wedge_basis_capped(alg, k, q, usize::MAX)
}

pub fn wedge_basis_capped(
    alg: &GradedAlgebra,
    k: &MultiDegree,
    q: usize,
    cap: usize,
) -> Result<ChainBasis> {
    if k.rank() != alg.rank() {
        return Err(Error::DimensionMismatch {
            expected: alg.rank(),
            found: k.rank(),
        });
    }
    if q == 0 {
        let monomials = if k.is_zero() {
            vec![WedgeMonomial(vec![])]
        } else {
            vec![]
        };
        return Ok(ChainBasis::new(k.clone(), 0, monomials));
    }
    if k.is_zero() || q as u32 > k.total() {
        return Ok(ChainBasis::new(k.clone(), q, vec![]));
    }
    require_below(alg, k, q == 1)?;
    if q == 1 {
        let monomials = alg
            .component_labels(k)
            .map(|l| WedgeMonomial(vec![l]))
            .collect();
        return Ok(ChainBasis::new(k.clone(), 1, monomials));
    }

    let candidates: Vec<u32> = alg
        .labels_with_total_at_most(k.total())
        .filter(|&l| alg.label_degree(l).lt(k))
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(q);
    enumerate(alg, &candidates, 0, k, q, &mut stack, &mut out, cap)?;
    Ok(ChainBasis::new(k.clone(), q, out))
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    alg: &GradedAlgebra,
    candidates: &[u32],
    start: usize,
    remaining: &MultiDegree,
    left: usize,
    stack: &mut Vec<u32>,
    out: &mut Vec<WedgeMonomial>,
    cap: usize,
) -> Result<()> {
    if left == 0 {
        if remaining.is_zero() {
            if out.len() >= cap {
                return Err(Error::BudgetExceeded {
                    dim: out.len() + 1,
                    cap,
                });
            }
            out.push(WedgeMonomial(stack.clone()));
        }
        return Ok(());
    }
    let rem_total = remaining.total();
    for pos in start..candidates.len() {
        let l = candidates[pos];
        let deg = alg.label_degree(l);
        // later factors have total degree at least this one's
        if deg.total() as usize * left > rem_total as usize {
            break;
        }
        let Some(next) = remaining.checked_sub(deg) else {
            continue;
        };
        if left == 1 && !next.is_zero() {
            continue;
        }
        stack.push(l);
        enumerate(alg, candidates, pos + 1, &next, left - 1, stack, out, cap)?;
        stack.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    #[test]
    fn degree_order_examples() {
        let o = degree_order(2, &Bound::total(2), DEFAULT_MAX_DEGREES).unwrap();
        let got: Vec<Vec<u32>> = o.degrees.into_iter().map(|k| k.0).collect();
        assert_eq!(got, vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);

        let o = degree_order(1, &Bound::total(3), DEFAULT_MAX_DEGREES).unwrap();
        let got: Vec<Vec<u32>> = o.degrees.into_iter().map(|k| k.0).collect();
        assert_eq!(got, vec![vec![1], vec![2], vec![3]]);

        let o = degree_order(
            3,
            &Bound::componentwise(MultiDegree(vec![1, 1, 1])),
            DEFAULT_MAX_DEGREES,
        )
        .unwrap();
        assert_eq!(o.degrees.len(), 7);
        assert_eq!(o.degrees.last().unwrap(), &MultiDegree(vec![1, 1, 1]));
    }

    #[test]
    fn degree_order_is_topological() {
        let o = degree_order(3, &Bound::total(5), DEFAULT_MAX_DEGREES).unwrap();
        for (i, a) in o.degrees.iter().enumerate() {
            for b in &o.degrees[..i] {
                assert!(!a.lt(b), "{a} precedes {b}");
            }
        }
    }

    #[test]
    fn degree_order_cap() {
        assert!(matches!(
            degree_order(3, &Bound::total(10), 10),
            Err(Error::BoundTooLarge { .. })
        ));
    }

    #[test]
    fn wedge_basis_examples() {
        let n3 = oracles::upper_triangular(3);
        let b = wedge_basis(&n3, &MultiDegree(vec![1, 1]), 2).unwrap();
        assert_eq!(b.len(), 1);
        let b = wedge_basis(&n3, &MultiDegree(vec![2, 2]), 2).unwrap();
        assert_eq!(b.len(), 0);

        let l1 = oracles::l1_algebra(10);
        let b = wedge_basis(&l1, &MultiDegree(vec![7]), 2).unwrap();
        let degs: Vec<Vec<u32>> = b
            .monomials
            .iter()
            .map(|m| m.0.iter().map(|&l| l1.label_degree(l).0[0]).collect())
            .collect();
        assert_eq!(degs, vec![vec![1, 6], vec![2, 5], vec![3, 4]]);
        assert!(wedge_basis(&l1, &MultiDegree(vec![3]), 4).unwrap().is_empty());
    }

    #[test]
    fn wedge_basis_requires_lower_components() {
        let l1 = oracles::l1_algebra(4);
        assert!(matches!(
            wedge_basis(&l1, &MultiDegree(vec![6]), 2),
            Err(Error::MissingComponent(_))
        ));
    }

    #[test]
    fn wedge_basis_budget() {
        let l1 = oracles::l1_algebra(20);
        assert!(matches!(
            wedge_basis_capped(&l1, &MultiDegree(vec![20]), 3, 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
