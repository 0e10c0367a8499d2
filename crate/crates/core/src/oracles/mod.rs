//! Explicit reference algebras used as independent ground truth for the
//! construction: `L₁(1)`, the current algebra `T⁺(n)`, strictly upper
//! triangular matrices `𝔫(n)`, and tabulated canonical bases for `G₂` and
//! `A₂⁽²⁾`.

mod canonical;
mod l1;
mod tplus;
mod upper;

pub use canonical::{a22_algebra, a22_alpha, g2_canonical, g2_consistent, A22Canonical, CanonicalTable, LoopMatrix};
pub use l1::l1_algebra;
pub use tplus::{tplus_algebra, tplus_degree, tplus_energy};
pub use upper::{interval_degree, upper_triangular};

use crate::cartan::MultiDegree;
use crate::error::Result;
use crate::grading::Bound;
use crate::liealg::GradedAlgebra;

/// Assembles an algebra from basis elements with known degrees.
///
/// `elements` may come in any order; they are sorted into label order
/// (stable within a degree). Returns the algebra and, for each input element,
/// its label.
pub(crate) fn assemble(
    name: &str,
    rank: usize,
    degrees: &[MultiDegree],
    bound: Option<&Bound>,
) -> Result<(GradedAlgebra, Vec<u32>)> {
    let mut order: Vec<usize> = (0..degrees.len()).collect();
    order.sort_by(|&a, &b| degrees[a].cmp(&degrees[b]));
    let mut alg = GradedAlgebra::new(name, rank);
    let mut label_of = vec![0u32; degrees.len()];
    let mut i = 0;
    while i < order.len() {
        let k = &degrees[order[i]];
        let mut j = i;
        while j < order.len() && &degrees[order[j]] == k {
            j += 1;
        }
        let labels = alg.add_component(k.clone(), j - i)?;
        for (off, &e) in order[i..j].iter().enumerate() {
            label_of[e] = labels.start + off as u32;
        }
        i = j;
    }
    match bound {
        Some(b) => alg.finalize_bound(b)?,
        None => alg.close(),
    }
    Ok((alg, label_of))
}
