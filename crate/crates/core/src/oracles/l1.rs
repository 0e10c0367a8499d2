use crate::cartan::MultiDegree;
use crate::grading::Bound;
use crate::liealg::GradedAlgebra;

/// `L₁(1)` truncated at `max_degree`: basis `e_i` (`deg e_i = i`,
/// orthonormal) with `[e_i, e_j] = (j − i) e_{i+j}`.
pub fn l1_algebra(max_degree: u32) -> GradedAlgebra {
    assert!(max_degree >= 1, "max_degree must be positive");
    let degrees: Vec<MultiDegree> = (1..=max_degree).map(|i| MultiDegree(vec![i])).collect();
    let (mut alg, label) = super::assemble("L1(1)", 1, &degrees, Some(&Bound::total(max_degree)))
        .expect("degrees are distinct");
    for i in 1..=max_degree {
        for j in (i + 1)..=max_degree {
            if i + j > max_degree {
                break;
            }
            let c = (j - i) as f64;
            let l = |d: u32| label[(d - 1) as usize];
            alg.set_bracket(l(i), l(j), vec![(l(i + j), c)])
                .expect("degree additive");
        }
    }
    alg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::check_jacobi;

    #[test]
    fn brackets() {
        let l1 = l1_algebra(10);
        // labels are e_{i} -> i-1
        assert_eq!(l1.bracket(0, 1), vec![(2, 1.0)]);
        assert_eq!(l1.bracket(1, 1), vec![]);
        assert_eq!(l1.bracket(1, 4), vec![(6, 3.0)]);
        assert_eq!(l1.bracket(4, 1), vec![(6, -3.0)]);
        assert_eq!(l1.bracket(4, 6), vec![]);
    }

    #[test]
    fn jacobi_exact() {
        let l1 = l1_algebra(15);
        for d in 1..=15 {
            assert_eq!(check_jacobi(&l1, &MultiDegree(vec![d])).unwrap(), 0.0);
        }
    }
}
