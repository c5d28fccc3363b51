use super::*;
use crate::palgebra::{abelian_lie, matrix_algebra, sl2, trivial_module};
use crate::{Rational, F7};

type Q = Rational;

fn borel<F: Scalar>() -> AlgebraMorphism<F> {
    // span{h, f} inside sl₂.
    sl2::<F>().subalgebra(&[1, 2]).unwrap().1
}

fn degrees(h: &RelativeHomology) -> Vec<usize> {
    h.totals().values().copied().collect()
}

#[test]
fn identity_base_gives_coinvariants_in_degree_zero() {
    let cases: Vec<(PAlgebra<Q>, bool, usize)> = vec![
        (abelian_lie(vec![1, 1]), false, 2),
        (sl2(), false, 0),
        // (g ⊗ g)_g is spanned by the Killing form.
        (sl2(), true, 1),
    ];
    for (a, regular, h0) in cases {
        let m = if regular { RightModule::from_left(&regular_module(&a)) } else { RightModule::trivial(&a) };
        let h = relative_homology(&AlgebraMorphism::identity(&a), &m, 3, 6).unwrap();
        assert_eq!(degrees(&h), vec![h0, 0, 0], "{:?}", a.names);
    }
}

#[test]
fn abelian_line_over_zero_base() {
    let a = abelian_lie::<Q>(vec![0]);
    let h = relative_homology(&AlgebraMorphism::from_zero(&a), &RightModule::trivial(&a), 4, 4).unwrap();
    assert_eq!(h.truncation, Truncation::PbwLength(4));
    assert_eq!(degrees(&h), vec![1, 1, 0, 0]);
    // Positive weight: the same answer, Tor_0 in weight 1 and Tor_1 in weight 2.
    let a = abelian_lie::<Q>(vec![1]);
    let h = relative_homology(&AlgebraMorphism::from_zero(&a), &RightModule::trivial(&a), 3, 5).unwrap();
    assert_eq!(h.truncation, Truncation::Weight(5));
    assert_eq!(degrees(&h), vec![1, 1, 0]);
    assert_eq!(h.by_weight[&1][&0], 1);
    assert_eq!(h.by_weight[&2][&1], 1);
}

#[test]
fn sl2_over_zero_base_is_acyclic() {
    let g = sl2::<Q>();
    let h = relative_homology(&AlgebraMorphism::from_zero(&g), &RightModule::trivial(&g), 3, 4).unwrap();
    assert_eq!(degrees(&h), vec![0, 0, 0]);
    let c = relative_cohomology(&AlgebraMorphism::from_zero(&g), &trivial_module(&g), 3, 4).unwrap();
    assert_eq!(degrees(&c), vec![0, 0, 0]);
}

#[test]
fn cohomology_of_abelian_line() {
    let a = abelian_lie::<Q>(vec![0]);
    let c = relative_cohomology(&AlgebraMorphism::from_zero(&a), &trivial_module(&a), 3, 4).unwrap();
    assert_eq!(c.direction, Direction::Cochain);
    assert_eq!(degrees(&c), vec![1, 1, 0]);
}

#[test]
fn finite_enveloping_algebras_over_zero_base() {
    // Tor^U(𝕜, 𝕜) for U = 𝕜[x]/x² and 𝕜[x]/x² ⊗ 𝕜[y]/y².
    let com = PAlgebra::<Q>::zero(ClassicalOperad::Com, vec!["x".into()], vec![0]);
    let h = relative_homology(&AlgebraMorphism::from_zero(&com), &RightModule::trivial(&com), 4, 0).unwrap();
    assert_eq!(h.truncation, Truncation::Exact);
    assert_eq!(degrees(&h), vec![1, 1, 1, 1]);
    let asc = PAlgebra::<Q>::zero(ClassicalOperad::Asc, vec!["x".into()], vec![0]);
    let h = relative_homology(&AlgebraMorphism::from_zero(&asc), &RightModule::trivial(&asc), 4, 0).unwrap();
    assert_eq!(degrees(&h), vec![1, 2, 3, 4]);
}

#[test]
fn borel_level_zero_counts_pbw_monomials() {
    // U(sl₂) ⊗_{U(b₋)} sl₂ ≅ 𝕜[e] ⊗ sl₂: weight w counts (k, a) with 2k + wt(a) = w.
    let f = borel::<Q>();
    let s = bar_simplicial(&f, &regular_module(&f.target), 0, 4).unwrap();
    let dims: BTreeMap<i64, usize> = s.components.iter().map(|(w, c)| (*w, c.dims[0])).collect();
    assert_eq!(dims, [(-2, 1), (0, 2), (2, 3), (4, 3)].into());
}

#[test]
fn simplicial_identities_hold() {
    let f = borel::<Q>();
    let s = bar_simplicial(&f, &regular_module(&f.target), 3, 4).unwrap();
    assert!(s.identity_failures().is_empty(), "{:?}", s.identity_failures());
    let a = abelian_lie::<Q>(vec![0, 0]);
    let s = bar_simplicial(&AlgebraMorphism::from_zero(&a), &trivial_module(&a), 3, 0).unwrap();
    assert_eq!(s.truncation, Truncation::PbwLength(4));
    assert!(s.identity_failures().is_empty(), "{:?}", s.identity_failures());
}

#[test]
fn cotriple_laws_on_the_adjoint_module() {
    let f = borel::<Q>();
    let t = cotriple_from_adjunction(&f).unwrap();
    let laws = t.check_laws(&regular_module(&f.target), 4).unwrap();
    assert!(laws.holds(), "{:?}", laws.failures);
    assert_eq!(t.apply(&regular_module(&f.target), 4).unwrap()[&0], 2);
}

#[test]
fn bar_resolution_is_exact_per_weight() {
    let f = borel::<Q>();
    let s = bar_simplicial(&f, &regular_module(&f.target), 3, 4).unwrap();
    for (w, c) in &s.components {
        let aug = c.augmented_complex().unwrap();
        assert!(aug.check_square_zero().is_ok());
        for n in -1..=2 {
            assert_eq!(aug.betti(n), 0, "weight {} degree {}", w, n);
        }
        let full = c.chain_complex().unwrap();
        let normalized = c.normalized_complex().unwrap();
        for n in 0..=2 {
            assert_eq!(full.betti(n), normalized.betti(n));
        }
    }
}

#[test]
fn comparison_with_operadic_homology() {
    // The relative side is Tor^U(𝕜, A); the operadic side is Tor^U(𝕜, Ω_A).
    let a = abelian_lie::<Q>(vec![0]);
    let r = compare_with_koszul(&a, &trivial_module(&a), 3, 4).unwrap();
    assert!(!r.agrees());
    assert_eq!(r.homology.iter().map(|d| (d.relative, d.operadic)).collect::<Vec<_>>(), vec![(1, 1), (1, 0), (0, 0)]);
    assert!(r.koszulness.verified());
    let g = sl2::<Q>();
    let r = compare_with_koszul(&g, &trivial_module(&g), 3, 4).unwrap();
    assert_eq!(r.mismatches(), vec!["homology degree 2: relative 0 vs operadic 1", "cohomology degree 2: relative 0 vs operadic 1"]);
}

#[test]
fn zero_algebra_has_no_homology() {
    let z = PAlgebra::<Q>::zero(ClassicalOperad::Lie, Vec::new(), Vec::new());
    let h = relative_homology(&AlgebraMorphism::from_zero(&z), &RightModule::trivial(&z), 3, 4).unwrap();
    assert_eq!(degrees(&h), vec![0, 0, 0]);
}

#[test]
fn mixed_weight_complement_is_a_config_error() {
    let g = sl2::<Q>();
    let cartan = g.subalgebra(&[1]).unwrap().1;
    match relative_homology(&cartan, &RightModule::trivial(&g), 2, 4) {
        Err(Error::Config(msg)) => assert!(msg.contains('e') && msg.contains('f'), "{}", msg),
        other => panic!("{:?}", other),
    }
    let m = matrix_algebra::<Q>(2);
    let unit = m.subalgebra(&[0]).unwrap().1;
    assert!(matches!(cotriple_from_adjunction(&unit), Err(Error::Config(_))));
}

#[test]
fn prime_field_matches_rationals() {
    let f = borel::<F7>();
    let s = bar_simplicial(&f, &regular_module(&f.target), 2, 4).unwrap();
    assert!(s.identity_failures().is_empty());
    let h = relative_homology(&f, &RightModule::trivial(&f.target), 3, 4).unwrap();
    let hq = relative_homology(&borel::<Q>(), &RightModule::trivial(&sl2()), 3, 4).unwrap();
    assert_eq!(h.by_weight, hq.by_weight);
}

#[test]
fn normalized_relative_complex_has_the_same_homology() {
    let f = borel::<Q>();
    let cases: Vec<(AlgebraMorphism<Q>, RightModule<Q>)> = vec![
        (f.clone(), RightModule::trivial(&f.target)),
        (f.clone(), RightModule::from_left(&regular_module(&f.target))),
        (AlgebraMorphism::from_zero(&abelian_lie(vec![1, 2])), RightModule::trivial(&abelian_lie(vec![1, 2]))),
    ];
    for (f, m) in cases {
        let full = relative_chain_complex(&f, &m, 4, 4).unwrap();
        let norm = normalized_relative_chain_complex(&f, &m, 4, 4).unwrap();
        for (w, c) in &full.components {
            for n in 0..4 {
                let other = norm.components.get(w).map_or(0, |d| d.betti(n));
                assert_eq!(c.betti(n), other, "weight {} degree {}", w, n);
            }
        }
    }
}
