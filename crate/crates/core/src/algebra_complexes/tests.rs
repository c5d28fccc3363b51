use super::*;
use crate::palgebra::{abelian_lie, affine_line_lie, matrix_algebra, regular_module, sl2, trivial_module};
use crate::{Rational, F7};

type Q = Rational;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn abelian_chain_dims_are_exterior_powers() {
    for d in 1..=4 {
        let c = chain_complex(&abelian_lie::<Q>(vec![0; d]), 3).unwrap();
        let expected: Vec<usize> = (0..=3).map(|n| binomial(d, n + 1)).collect();
        assert_eq!(c.dims(), expected);
        assert!((1..=3).all(|n| c.complex.differential(n).is_zero()));
    }
}

#[test]
fn sl2_chain_dims() {
    let c = chain_complex(&sl2::<Q>(), 3).unwrap();
    assert_eq!(c.dims(), vec![3, 3, 1, 0]);
    assert_eq!(c.homology(), [(0, 0), (1, 0), (2, 1)].into());
}

#[test]
fn associative_zero_product_line() {
    let a = PAlgebra::<Q>::zero(ClassicalOperad::Asc, vec!["x".into()], vec![0]);
    let c = chain_complex(&a, 4).unwrap();
    assert_eq!(c.dims(), vec![1; 5]);
    assert!((1..=4).all(|n| c.complex.differential(n).is_zero()));
}

#[test]
fn abelian_cohomology_trivial_coefficients() {
    for d in 1..=3 {
        let a = abelian_lie::<Q>(vec![0; d]);
        let c = cochain_complex(&a, &trivial_module(&a), 3).unwrap();
        let expected: BTreeMap<i64, usize> = (0..3).map(|n| (n as i64, binomial(d, n + 1))).collect();
        assert_eq!(c.cohomology(), expected);
    }
}

#[test]
fn sl2_cohomology_trivial_coefficients() {
    let g = sl2::<Q>();
    let c = cochain_complex(&g, &trivial_module(&g), 3).unwrap();
    assert_eq!(c.cohomology(), [(0, 0), (1, 0), (2, 1)].into());
}

#[test]
fn degree_zero_cocycles_are_abelianization_dual() {
    // dim (A/[A,A])*: abelian 3, affine line 1, sl₂ 0.
    let cases: Vec<(PAlgebra<Q>, usize)> = vec![(abelian_lie(vec![0; 3]), 3), (affine_line_lie(), 1), (sl2(), 0)];
    for (a, expected) in cases {
        let c = cochain_complex(&a, &trivial_module(&a), 2).unwrap();
        assert_eq!(c.complex.differential(0).kernel_dim(), expected);
    }
}

#[test]
fn cross_checks_agree() {
    let lie: Vec<PAlgebra<Q>> = vec![abelian_lie(vec![0, 0]), sl2(), affine_line_lie()];
    for a in &lie {
        for m in [trivial_module(a), regular_module(a)] {
            let r = classical_cross_check(a, &m, 3).unwrap();
            assert!(r.agrees(), "{:?} {:?}", a.names, r);
            assert!(r.koszulness.verified());
            assert_eq!(r.degree_shift, 1);
        }
    }
    let asc: Vec<PAlgebra<Q>> = vec![PAlgebra::zero(ClassicalOperad::Asc, vec!["x".into()], vec![0]), matrix_algebra(2)];
    for a in &asc {
        for m in [trivial_module(a), regular_module(a)] {
            let r = classical_cross_check(a, &m, 2).unwrap();
            assert!(r.agrees(), "{:?} {:?}", a.names, r);
        }
    }
}

#[test]
fn cross_check_rejects_commutative() {
    let a = PAlgebra::<Q>::zero(ClassicalOperad::Com, vec!["x".into()], vec![1]);
    assert!(classical_cross_check(&a, &trivial_module(&a), 2).is_err());
}

#[test]
fn weight_components_add_up() {
    let g = sl2::<Q>();
    let c = chain_complex(&g, 3).unwrap();
    let by_weight = c.weight_homology();
    for (n, total) in c.homology() {
        let sum: usize = by_weight.values().map(|h| h[&n]).sum();
        assert_eq!(sum, total);
    }
    // Λ³ sl₂ has weight 0.
    assert_eq!(by_weight[&0][&2], 1);
    let m = regular_module(&g);
    let cc = cochain_complex(&g, &m, 3).unwrap();
    let by_weight = cc.weight_cohomology();
    for (n, total) in cc.cohomology() {
        let sum: usize = by_weight.values().map(|h| h[&n]).sum();
        assert_eq!(sum, total);
    }
}

#[test]
fn prime_field_agrees_with_rationals() {
    let g = sl2::<F7>();
    let c = cochain_complex(&g, &trivial_module(&g), 3).unwrap();
    assert_eq!(c.cohomology(), [(0, 0), (1, 0), (2, 1)].into());
    // p = 3 does not exceed the arity used here.
    assert!(chain_complex(&sl2::<crate::Fp<3>>(), 3).is_err());
}

#[test]
fn mismatched_module_rejected() {
    let g = sl2::<Q>();
    let a = abelian_lie::<Q>(vec![0; 2]);
    assert!(cochain_complex(&g, &trivial_module(&a), 2).is_err());
}
