use crate::cartan::MultiDegree;
use crate::liealg::GradedAlgebra;

/// The interval point `{i, j}` of rank `rank`: ones in positions `i..j−1`
/// (1-based), zeros elsewhere. Requires `1 ≤ i < j ≤ rank + 1`.
pub fn interval_degree(rank: usize, i: usize, j: usize) -> MultiDegree {
    assert!(1 <= i && i < j && j <= rank + 1, "bad interval {{{i},{j}}}");
    MultiDegree(
        (1..=rank)
            .map(|s| u32::from(i <= s && s < j))
            .collect(),
    )
}

/// Strictly upper triangular `n × n` matrices with orthonormal basis `E_ij`
/// (`i < j`), graded by `deg E_ij = {i, j}`.
pub fn upper_triangular(n: usize) -> GradedAlgebra {
    assert!(n >= 2, "need n >= 2");
    let rank = n - 1;
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    let degrees: Vec<MultiDegree> = pairs.iter().map(|&(i, j)| interval_degree(rank, i, j)).collect();
    let (mut alg, label) =
        super::assemble(&format!("n({n})"), rank, &degrees, None).expect("distinct degrees");
    let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).map(|p| label[p]);
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            if label[a] >= label[b] {
                continue;
            }
            // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
            let mut terms = Vec::new();
            if j == k {
                terms.push((index(i, l).expect("i < l"), 1.0));
            }
            if l == i {
                terms.push((index(k, j).expect("k < j"), -1.0));
            }
            if !terms.is_empty() {
                alg.set_bracket(label[a], label[b], terms).expect("degree additive");
            }
        }
    }
    alg
}
