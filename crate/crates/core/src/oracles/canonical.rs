use std::f64::consts::SQRT_2;

use crate::cartan::MultiDegree;
use crate::error::{Error, Result};
use crate::grading::Bound;
use crate::liealg::GradedAlgebra;

/// A tabulated basis with its nonzero bracket relations
/// `[x, y] = coeff · z`, all basis vectors orthonormal and one-dimensional
/// per degree.
#[derive(Clone, Debug)]
pub struct CanonicalTable {
    pub name: String,
    pub degrees: Vec<MultiDegree>,
    pub relations: Vec<(MultiDegree, MultiDegree, f64, MultiDegree)>,
}

impl CanonicalTable {
    pub fn to_algebra(&self) -> Result<GradedAlgebra> {
        let (mut alg, _) = super::assemble(&self.name, self.degrees[0].rank(), &self.degrees, None)?;
        for (x, y, c, z) in &self.relations {
            let l = |k: &MultiDegree| {
                let r = alg.component_labels(k);
                if r.len() == 1 {
                    Ok(r.start)
                } else {
                    Err(Error::Format(format!("no basis vector at {k}")))
                }
            };
            let (a, b, t) = (l(x)?, l(y)?, l(z)?);
            alg.set_bracket(a, b, vec![(t, *c)])?;
        }
        Ok(alg)
    }

    /// The same table with the sign of the relation for `[x, y]` reversed.
    pub fn with_sign_flipped(&self, x: &MultiDegree, y: &MultiDegree) -> Self {
        let mut t = self.clone();
        for (a, b, c, _) in &mut t.relations {
            if (&*a == x && &*b == y) || (&*a == y && &*b == x) {
                *c = -*c;
            }
        }
        t
    }

    /// The tabulated coefficient of `[x, y]`, zero when absent.
    pub fn bracket(&self, x: &MultiDegree, y: &MultiDegree) -> f64 {
        self.relations
            .iter()
            .find_map(|(a, b, c, _)| {
                if a == x && b == y {
                    Some(*c)
                } else if a == y && b == x {
                    Some(-*c)
                } else {
                    None
                }
            })
            .unwrap_or(0.0)
    }
}

/// Canonical basis `e_{i,j}` (`deg = (i, j)`) of `N(G₂)` for the Cartan
/// matrix `[[2,−1],[−3,2]]`, as usually tabulated.
///
/// The signs as listed violate the Jacobi identity in degree `(2,3)`;
/// reversing any one relation on that cycle, e.g. `[e_{1,1}, e_{1,2}]`,
/// gives a Lie algebra (see [`g2_consistent`]).
pub fn g2_canonical() -> CanonicalTable {
    let d = |i, j| MultiDegree(vec![i, j]);
    let s3 = 3f64.sqrt();
    CanonicalTable {
        name: "G2-canonical".into(),
        degrees: vec![d(0, 1), d(1, 0), d(1, 1), d(1, 2), d(1, 3), d(2, 3)],
        relations: vec![
            (d(0, 1), d(1, 0), s3, d(1, 1)),
            (d(0, 1), d(1, 1), 2.0, d(1, 2)),
            (d(0, 1), d(1, 2), s3, d(1, 3)),
            (d(1, 0), d(1, 3), s3, d(2, 3)),
            (d(1, 1), d(1, 2), s3, d(2, 3)),
        ],
    }
}

/// [`g2_canonical`] with `[e_{1,1}, e_{1,2}] = −√3 e_{2,3}`.
pub fn g2_consistent() -> CanonicalTable {
    let d = |i, j| MultiDegree(vec![i, j]);
    let mut t = g2_canonical().with_sign_flipped(&d(1, 1), &d(1, 2));
    t.name = "G2-consistent".into();
    t
}

/// `α_ij` for `1 ≤ i, j ≤ 8` (stored 0-based).
pub fn a22_alpha() -> [[f64; 8]; 8] {
    let r2 = SQRT_2;
    let r6 = 6f64.sqrt();
    let r8 = 8f64.sqrt();
    [
        [0.0, 2.0, r6, -r6, -2.0, 0.0, r2, -r2],
        [-2.0, 0.0, 0.0, 0.0, 2.0, -r8, 0.0, r8],
        [-r6, 0.0, 0.0, r6, -r2, 2.0, -2.0, r2],
        [r6, 0.0, -r6, 0.0, r6, 0.0, -r6, 0.0],
        [2.0, -2.0, r2, -r6, 0.0, 0.0, r6, -r2],
        [0.0, r8, -2.0, 0.0, 0.0, 0.0, 2.0, -r8],
        [-r2, 0.0, 2.0, r6, -r6, -2.0, 0.0, r2],
        [r2, -r8, -r2, 0.0, r2, r8, -r2, 0.0],
    ]
}

/// A `3×3` real matrix times `t^power` in `sl(3) ⊗ ℝ[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopMatrix {
    pub power: u32,
    pub m: [[f64; 3]; 3],
}

impl LoopMatrix {
    pub fn commutator(&self, other: &LoopMatrix) -> LoopMatrix {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                for k in 0..3 {
                    *x += self.m[i][k] * other.m[k][j] - other.m[i][k] * self.m[k][j];
                }
            }
        }
        LoopMatrix {
            power: self.power + other.power,
            m,
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.m.iter().flatten().all(|x| x.abs() <= tol)
    }

    /// `max |self − c·other|`, infinite if the powers differ and neither side vanishes.
    pub fn distance_to_multiple(&self, c: f64, other: &LoopMatrix) -> f64 {
        let mut d: f64 = 0.0;
        let same = self.power == other.power;
        for i in 0..3 {
            for j in 0..3 {
                let rhs = if same { c * other.m[i][j] } else { 0.0 };
                d = d.max((self.m[i][j] - rhs).abs());
            }
        }
        if !same && c != 0.0 && !other.is_zero(0.0) {
            return f64::INFINITY;
        }
        d
    }
}

/// The canonical basis `e_i` (`i ≥ 1`) of `N(A₂⁽²⁾)` realized in the loop
/// algebra `sl(3) ⊗ ℝ[t]`, with 8-periodic structure constants `α`.
///
/// The tabulated grading counts `(e₁-letters, e₂-letters)` where `e₁` is the
/// generator satisfying `(ad e₁)⁵ e₂ = 0`. Degrees here are reported in the
/// generator order of the Cartan matrix `[[2,−1],[−4,2]]`, i.e. as
/// `(e₂-letters, e₁-letters)`.
#[derive(Clone, Copy, Debug)]
pub struct A22Canonical {
    pub max_index: usize,
}

impl A22Canonical {
    pub fn new(max_index: usize) -> Self {
        A22Canonical { max_index }
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.max_index {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.max_index,
            });
        }
        Ok(())
    }

    /// `(e₁-letters, e₂-letters)` from the tabulated rule for `8n + s`,
    /// `−1 ≤ s ≤ 6`.
    pub fn table_degree(i: usize) -> (u32, u32) {
        let s = ((i + 1) % 8) as i64 - 1;
        let n = (i as i64 - s) / 8;
        if s <= 1 {
            ((4 * n + s) as u32, (2 * n) as u32)
        } else {
            ((4 * n + s - 2) as u32, (2 * n + 1) as u32)
        }
    }

    pub fn degree(&self, i: usize) -> Result<MultiDegree> {
        self.check(i)?;
        let (x, y) = Self::table_degree(i);
        Ok(MultiDegree(vec![y, x]))
    }

    pub fn alpha(i: usize, j: usize) -> f64 {
        a22_alpha()[(i - 1) % 8][(j - 1) % 8]
    }

    /// `[e_i, e_j] = α · e_{i+j}`; returns `(α, i + j)`.
    pub fn bracket(&self, i: usize, j: usize) -> Result<(f64, usize)> {
        self.check(i)?;
        self.check(j)?;
        Ok((Self::alpha(i, j), i + j))
    }

    pub fn loop_matrix(&self, i: usize) -> Result<LoopMatrix> {
        self.check(i)?;
        let s = (i / 8) as u32;
        let mut m = [[0.0; 3]; 3];
        let power = match i % 8 {
            0 => {
                m[0][0] = SQRT_2;
                m[2][2] = -SQRT_2;
                2 * s
            }
            1 => {
                m[0][1] = 2.0;
                m[1][2] = 2.0;
                2 * s
            }
            2 => {
                m[2][0] = 1.0;
                2 * s + 1
            }
            3 => {
                m[1][0] = 1.0;
                m[2][1] = -1.0;
                2 * s + 1
            }
            4 => {
                let c = (2.0f64 / 3.0).sqrt();
                m[0][0] = c;
                m[1][1] = -2.0 * c;
                m[2][2] = c;
                2 * s + 1
            }
            5 => {
                m[0][1] = 2.0;
                m[1][2] = -2.0;
                2 * s + 1
            }
            6 => {
                m[0][2] = 4.0;
                2 * s + 1
            }
            _ => {
                m[1][0] = 1.0;
                m[2][1] = 1.0;
                2 * s + 2
            }
        };
        Ok(LoopMatrix { power, m })
    }
}

/// `N(A₂⁽²⁾)` in the tabulated canonical basis, truncated at total degree
/// `max_total`.
pub fn a22_algebra(max_total: u32) -> GradedAlgebra {
    let count = (1..)
        .take_while(|&i| {
            let (x, y) = A22Canonical::table_degree(i);
            x + y <= max_total
        })
        .count();
    let table = A22Canonical::new(count.max(1));
    let degrees: Vec<MultiDegree> = (1..=count)
        .map(|i| table.degree(i).expect("in range"))
        .collect();
    let (mut alg, label) = super::assemble("A2(2)-canonical", 2, &degrees, Some(&Bound::total(max_total)))
        .expect("one basis vector per degree");
    for i in 1..=count {
        for j in (i + 1)..=count {
            if i + j > count {
                break;
            }
            let (c, t) = table.bracket(i, j).expect("in range");
            if c == 0.0 {
                continue;
            }
            alg.set_bracket(label[i - 1], label[j - 1], vec![(label[t - 1], c)])
                .expect("grading is additive");
        }
    }
    alg
}
