//! Property tests for the invariants of the construction and its helpers.

use proptest::prelude::*;

use kmnil::cartan::{CartanMatrix, MultiDegree};
use kmnil::cohomology::{interval_decomposition, weyl_orbit, weyl_reflection};
use kmnil::construct::{build, BuildOptions};
use kmnil::grading::{wedge_basis, Bound};
use kmnil::liealg::{check_order_two, Chain, GradedAlgebra};
use kmnil::oracles::{l1_algebra, tplus_energy};
use kmnil::spectrum::{index_tuples, predicted_spectrum};

fn presets() -> Vec<CartanMatrix> {
    vec![
        CartanMatrix::a2(),
        CartanMatrix::b2(),
        CartanMatrix::g2(),
        CartanMatrix::a22(),
        CartanMatrix::cyclic(3),
        CartanMatrix::type_a(4),
        CartanMatrix::validate(vec![vec![2, -3], vec![-3, 2]]).unwrap(),
        CartanMatrix::validate(vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -3, 2]]).unwrap(),
    ]
}

/// Partitions of `d` into `q` distinct parts.
fn distinct_partitions(d: u32, q: u32) -> u64 {
    fn rec(left: u32, parts: u32, min: u32) -> u64 {
        if parts == 0 {
            return u64::from(left == 0);
        }
        (min..=left).map(|x| rec(left - x, parts - 1, x + 1)).sum()
    }
    rec(d, q, 1)
}

fn chain_from(alg: &GradedAlgebra, labels: &[u32]) -> Chain {
    Chain::wedge_of_labels(alg, labels)
}

proptest! {
    #[test]
    fn energy_is_the_quadratic_form(idx in 0usize..8, raw in prop::collection::vec(0u32..7, 4)) {
        let cm = &presets()[idx];
        let n = cm.rank();
        let k: Vec<i64> = raw.iter().take(n).map(|&x| x as i64).collect();
        let k = if k.len() < n { [k, vec![0; n]].concat()[..n].to_vec() } else { k };
        let d = cm.symmetrizer();
        let mut twice = 0i64;
        for i in 0..n {
            twice += 2 * d[i] * k[i];
            for j in 0..n {
                twice -= d[i] * cm.entry(i, j) * k[i] * k[j];
            }
        }
        prop_assert_eq!(twice % 2, 0);
        prop_assert_eq!(cm.energy_of(&k).unwrap(), twice / 2);
        // unit degrees always have energy zero
        for i in 0..n {
            prop_assert_eq!(cm.energy(&MultiDegree::unit(n, i)).unwrap(), 0);
        }
    }

    #[test]
    fn tplus_energy_is_cyclic_energy(n in 2usize..5, raw in prop::collection::vec(0u32..6, 4)) {
        let k = MultiDegree(raw[..n].to_vec());
        prop_assert_eq!(tplus_energy(&k), CartanMatrix::cyclic(n).energy(&k).unwrap());
    }

    #[test]
    fn reflections_are_involutions(x in prop::collection::vec(-20i64..20, 1..6), pick in 0usize..6) {
        let i = pick % x.len() + 1;
        let y = weyl_reflection(i, &x).unwrap();
        prop_assert_eq!(weyl_reflection(i, &y).unwrap(), x.clone());
        // the A_n energy is invariant
        let cm = CartanMatrix::type_a(x.len());
        prop_assert_eq!(cm.energy_of(&x).unwrap(), cm.energy_of(&y).unwrap());
    }

    #[test]
    fn l1_wedge_counts(d in 1u32..22, q in 1usize..6) {
        let l1 = l1_algebra(22);
        let b = wedge_basis(&l1, &MultiDegree(vec![d]), q).unwrap();
        // q = 1 picks e_d itself, which is a one-part partition
        prop_assert_eq!(b.len() as u64, distinct_partitions(d, q as u32));
    }

    #[test]
    fn order_two_identity_on_l1(picks in prop::collection::vec(0u32..6, 6), sizes in (1usize..3, 1usize..3, 1usize..3)) {
        let l1 = l1_algebra(14);
        let mut it = picks.iter();
        let mut take = |q: usize| -> Vec<u32> { (0..q).map(|_| *it.next().unwrap()).collect() };
        let (a, b, c) = (take(sizes.0), take(sizes.1), take(sizes.2));
        let total: u32 = [&a, &b, &c].iter().flat_map(|v| v.iter()).map(|&l| l + 1).sum();
        prop_assume!(total <= 14);
        let r = check_order_two(&l1, &chain_from(&l1, &a), &chain_from(&l1, &b), &chain_from(&l1, &c)).unwrap();
        prop_assert!(r < 1e-8, "residual {}", r);
    }

    #[test]
    fn predicted_eigenvalues_are_nonnegative_integers(d in 1u32..40) {
        for (v, m) in predicted_spectrum(d).entries {
            prop_assert!(v >= 0.0 && v.fract() == 0.0 && m > 0);
        }
        // zero eigenvalues come only from the two ladders
        let zeros: usize = index_tuples(d)
            .iter()
            .filter(|t| kmnil::spectrum::e_value(t) == 0)
            .count();
        let ladder = |r: u32| (1..).map(|q: u32| q * (3 * q - 1) / 2 + (r - 1) * q).take_while(|&s| s <= d).any(|s| s == d);
        prop_assert_eq!(zeros, usize::from(ladder(1)) + usize::from(ladder(2)));
    }

    #[test]
    fn degree_order_refines_partial_order(a in prop::collection::vec(0u32..5, 3), b in prop::collection::vec(0u32..5, 3)) {
        let (a, b) = (MultiDegree(a), MultiDegree(b));
        if a.lt(&b) {
            prop_assert!(a < b);
        }
    }
}

#[test]
fn order_two_identity_on_constructed_algebra() {
    let c = build(&CartanMatrix::a22(), &Bound::total(9), &BuildOptions::default()).unwrap();
    let alg = &c.algebra;
    let n = alg.num_labels() as u32;
    let mut checked = 0;
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                let t = alg.label_degree(a).add(alg.label_degree(b)).add(alg.label_degree(x));
                if t.total() > 9 {
                    continue;
                }
                let r = check_order_two(alg, &chain_from(alg, &[a]), &chain_from(alg, &[b]), &chain_from(alg, &[x])).unwrap();
                assert!(r < 1e-8, "({a},{b},{x}): {r}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn decompositions_sum_back_to_orbit_points() {
    for n in 1..=4 {
        for p in weyl_orbit(n, usize::MAX).unwrap() {
            let mut sum = vec![0i64; n];
            for &(i, j) in &interval_decomposition(&p.x).unwrap() {
                for s in i..j {
                    sum[s - 1] += 1;
                }
            }
            assert_eq!(sum, p.x);
        }
    }
    assert_eq!(weyl_orbit(4, usize::MAX).unwrap().len(), 120);
}

#[test]
fn builds_are_bit_stable() {
    for cm in presets() {
        let bound = Bound::total(if cm.rank() > 2 { 5 } else { 7 });
        let a = build(&cm, &bound, &BuildOptions::default()).unwrap().dump().to_json().unwrap();
        let b = build(&cm, &bound, &BuildOptions::default()).unwrap().dump().to_json().unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn scalarity_on_random_looking_matrices() {
    // hyperbolic and rank-3 matrices outside the acceptance list
    for cm in presets().into_iter().skip(6) {
        let bound = Bound::total(6);
        let c = build(&cm, &bound, &BuildOptions::default()).unwrap();
        for k in kmnil::grading::degree_order(cm.rank(), &bound, usize::MAX).unwrap().degrees {
            let e = cm.energy(&k).unwrap() as f64;
            let cx = kmnil::liealg::DegreeComplex::new(&c.algebra, &k).unwrap();
            for q in 0..=cx.qmax() {
                let r = kmnil::liealg::scalar_residual(&cx.laplacian(q), e);
                assert!(r < 1e-8 * e.max(1.0), "{:?} at {k}, q={q}: {r}", cm.entries());
            }
        }
    }
}
