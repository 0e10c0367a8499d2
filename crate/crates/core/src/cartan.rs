//! Generalized Cartan matrices, multidegrees and the energy polynomial.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An n-tuple of non-negative integers indexing graded objects.
///
/// Ordered by total degree first, then reverse-lexicographically, so that
/// `(1,0)` precedes `(0,1)`. This is the order in which components are built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(n: usize) -> Self {
        MultiDegree(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut k = vec![0; n];
        k[i] = 1;
        MultiDegree(k)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self ⪯ other`.
    pub fn le(&self, other: &MultiDegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict partial order `self ≺ other`.
    pub fn lt(&self, other: &MultiDegree) -> bool {
        self.le(other) && self != other
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` unless `other ⪯ self`.
    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        if !other.le(self) {
            return None;
        }
        Some(MultiDegree(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// All nonzero `j ⪯ self`, in no particular order.
    pub fn nonzero_predecessors(&self) -> Vec<MultiDegree> {
        let mut out = vec![MultiDegree(vec![])];
        for &ki in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (ki as usize + 1));
            for prefix in &out {
                for v in 0..=ki {
                    let mut p = prefix.0.clone();
                    p.push(v);
                    next.push(MultiDegree(p));
                }
            }
            out = next;
        }
        out.retain(|j| !j.is_zero());
        out
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }

    /// Parses `"1,2,0"`.
    pub fn parse(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Format(format!("bad degree entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiDegree)
    }
}

impl Ord for MultiDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A validated symmetrizable generalized Cartan matrix with its minimal
/// integral symmetrizer `d` (gcd 1 on every connected component).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

#[derive(Deserialize)]
struct MatrixDoc {
    matrix: Vec<Vec<i64>>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

impl CartanMatrix {
    /// Validates `a` and computes its symmetrizer.
    ///
    /// Ratios `d_j / d_i = a_ij / a_ji` are propagated along a spanning tree
    /// of each connected component of the nonzero pattern; every edge is then
    /// rechecked, which covers the cycle conditions.
    pub fn validate(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::NotGcm("empty matrix".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotGcm(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::NotGcm(format!(
                    "diagonal entry a[{i}][{i}] = {}",
                    a[i][i]
                )));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return Err(Error::NotGcm(format!(
                        "positive off-diagonal entry a[{i}][{j}] = {}",
                        a[i][j]
                    )));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::NotGcm(format!(
                        "asymmetric zero pattern at ({i},{j})"
                    )));
                }
            }
        }

        // d as fractions num/den
        let mut num = vec![0i64; n];
        let mut den = vec![0i64; n];
        let mut component = vec![usize::MAX; n];
        let mut n_components = 0;
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            num[root] = 1;
            den[root] = 1;
            component[root] = n_components;
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if j == i || a[i][j] == 0 || component[j] != usize::MAX {
                        continue;
                    }
                    // d_j = d_i * a_ij / a_ji
                    let p = num[i] * a[i][j];
                    let q = den[i] * a[j][i];
                    let g = gcd(p, q);
                    num[j] = (p / g).abs();
                    den[j] = (q / g).abs();
                    component[j] = n_components;
                    queue.push_back(j);
                }
            }
            n_components += 1;
        }

        let mut d = vec![0i64; n];
        for c in 0..n_components {
            let members: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
            let l = members.iter().fold(1, |acc, &i| lcm(acc, den[i]));
            for &i in &members {
                d[i] = num[i] * (l / den[i]);
            }
            let g = members.iter().fold(0, |acc, &i| gcd(acc, d[i]));
            for &i in &members {
                d[i] /= g;
            }
        }

        for i in 0..n {
            for j in 0..n {
                if d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(Error::NotSymmetrizable(format!(
                        "d_{i}·a_{i}{j} ≠ d_{j}·a_{j}{i} along a cycle"
                    )));
                }
            }
        }
        Ok(CartanMatrix { a, d })
    }

    /// Parses `{"matrix": [[...], ...]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MatrixDoc = serde_json::from_str(s)?;
        Self::validate(doc.matrix)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    /// True iff the nonzero-pattern graph is connected.
    pub fn is_irreducible(&self) -> bool {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.a[i][j] != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `E(k) = Σ d_i k_i − ½ Σ d_i a_ij k_i k_j`, exactly.
    pub fn energy(&self, k: &MultiDegree) -> Result<i64> {
        self.energy_of(&k.as_i64())
    }

    /// Energy on an arbitrary integer vector.
    pub fn energy_of(&self, k: &[i64]) -> Result<i64> {
        let n = self.rank();
        if k.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: k.len(),
            });
        }
        let mut e = 0;
        for i in 0..n {
            e += self.d[i] * k[i] - self.d[i] * k[i] * k[i];
            for j in (i + 1)..n {
                e -= self.d[i] * self.a[i][j] * k[i] * k[j];
            }
        }
        Ok(e)
    }

    /// The Serre degree `k_i = 1 − a_ij`, `k_j = 1` for an ordered pair `i ≠ j`.
    pub fn serre_degree(&self, i: usize, j: usize) -> MultiDegree {
        let mut k = vec![0u32; self.rank()];
        k[i] = (1 - self.a[i][j]) as u32;
        k[j] = 1;
        MultiDegree(k)
    }

    pub fn a2() -> Self {
        Self::validate(vec![vec![2, -1], vec![-1, 2]]).expect("valid")
    }

    pub fn b2() -> Self {
        Self::validate(vec![vec![2, -1], vec![-2, 2]]).expect("valid")
    }

    pub fn g2() -> Self {
        Self::validate(vec![vec![2, -1], vec![-3, 2]]).expect("valid")
    }

    /// Twisted affine `A₂⁽²⁾`.
    pub fn a22() -> Self {
        Self::validate(vec![vec![2, -1], vec![-4, 2]]).expect("valid")
    }

    /// Finite type `A_n` (so `rank = n`, `N(A) = 𝔫(n+1)`).
    pub fn type_a(n: usize) -> Self {
        let a = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Self::validate(a).expect("valid")
    }

    /// Untwisted affine `A_{n−1}⁽¹⁾` with its cyclic diagram. For `n = 2` the
    /// two neighbours coincide and the off-diagonal entries become −2.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 2, "cyclic matrix needs n >= 2");
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            let next = (i + 1) % n;
            a[i][next] -= 1;
            a[next][i] -= 1;
        }
        Self::validate(a).expect("valid")
    }
}
