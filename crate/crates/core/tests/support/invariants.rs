//! Randomized structural invariants shared by the proptest suite and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use opalg::algebra_complexes::{chain_complex, cochain_complex};
use opalg::exactalg::{SVec, SparseMatrix};
use opalg::operad_core::tree::{add_term, Tree, TreeVec};
use opalg::operad_core::{quotient_presentation, OperadPresentation, SigmaObject};
use opalg::palgebra::{abelian_lie, graded_hom_space, induce_module, regular_module, restrict_module, sl2, trivial_module, AlgebraMorphism, PAlgebra};
use opalg::relhom::{bar_simplicial, cotriple_from_adjunction};
use opalg::symcore::{Coinvariants, SigmaRep};
use opalg::{Error, Rational, Scalar};

type Q = Rational;

pub const SEED: u64 = 0x5eed_0a1e;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

fn node(a: Tree, b: Tree) -> Tree {
    Tree::Node { arity: 2, decoration: 0, children: vec![a, b] }
}

fn leaf(i: usize) -> Tree {
    Tree::Leaf(i)
}

/// One binary generator, symmetric or antisymmetric, and one cubic relation with small integer
/// coefficients on the three left combs.
pub fn random_presentation() -> impl Strategy<Value = (bool, [i64; 3])> {
    (any::<bool>(), prop::array::uniform3(-2i64..=2))
}

pub fn operad_axioms((symmetric, c): (bool, [i64; 3])) -> Result<(), TestCaseError> {
    let mut generators = SigmaObject::<Q>::zero(2);
    let rep = if symmetric { SigmaRep::trivial(2, 0) } else { SigmaRep::sign(2, 0) };
    generators.set(rep, Some(vec!["g".into()]), None);
    let combs = [node(node(leaf(0), leaf(1)), leaf(2)), node(node(leaf(1), leaf(2)), leaf(0)), node(node(leaf(2), leaf(0)), leaf(1))];
    let mut rel = TreeVec::new();
    for (t, k) in combs.into_iter().zip(c) {
        add_term(&mut rel, t, Q::from_i64(k));
    }
    let pres = OperadPresentation { name: "random".into(), generators, relations: vec![(3, rel)] };
    let q = quotient_presentation(&pres, 4).map_err(|e| TestCaseError::fail(e.to_string()))?;
    q.operad.check_axioms().map_err(|e| TestCaseError::fail(format!("{:?}: {}", c, e)))?;
    prop_assert_eq!(q.operad.dim(1), 1);
    prop_assert_eq!(q.operad.dim(2), 1);
    Ok(())
}

/// Abelian algebras with random weights, a random coordinate subalgebra as base, and the regular
/// or trivial module.
pub fn random_bar_instance() -> impl Strategy<Value = (Vec<i64>, Vec<bool>, bool, usize)> {
    (1usize..=3).prop_flat_map(|d| (prop::collection::vec(prop_oneof![-2i64..=-1, 1i64..=2], d), prop::collection::vec(any::<bool>(), d), any::<bool>(), 1usize..=3))
}

pub fn simplicial_identities((weights, in_base, regular, level): (Vec<i64>, Vec<bool>, bool, usize)) -> Result<(), TestCaseError> {
    let a = abelian_lie::<Q>(weights);
    let base: Vec<usize> = (0..a.dim()).filter(|&i| in_base[i]).collect();
    let f = a.subalgebra(&base).map_err(|e| TestCaseError::fail(e.to_string()))?.1;
    let x = if regular { regular_module(&a) } else { trivial_module(&a) };
    match bar_simplicial(&f, &x, level, 3) {
        Ok(s) => {
            let failures = s.identity_failures();
            prop_assert!(failures.is_empty(), "{:?}", failures);
            for c in s.components.values() {
                let complex = c.chain_complex().map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(complex.check_square_zero().is_ok());
            }
            Ok(())
        }
        // Mixed complement weights over a nonzero base are rejected by design.
        Err(Error::Config(_)) => Err(TestCaseError::reject("mixed complement weights")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

/// sl₂ with its basis rescaled by random nonzero integers.
pub fn random_scaling() -> impl Strategy<Value = [i64; 3]> {
    prop::array::uniform3(prop_oneof![-3i64..=-1, 1i64..=3])
}

fn rescaled_sl2(s: [i64; 3]) -> PAlgebra<Q> {
    let g = sl2::<Q>();
    let change = SparseMatrix::from_triplets(3, 3, (0..3).map(|i| (i, i, Q::from_i64(s[i]))));
    g.change_basis(&change, g.weights.clone()).expect("diagonal change of basis")
}

pub fn square_zero(s: [i64; 3]) -> Result<(), TestCaseError> {
    let g = rescaled_sl2(s);
    let c = chain_complex(&g, 3).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(c.complex.check_square_zero().is_ok());
    let k = cochain_complex(&g, &trivial_module(&g), 3).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(k.complex.check_square_zero().is_ok());
    let h: Vec<usize> = k.cohomology().into_values().collect();
    prop_assert_eq!(h, vec![0, 0, 1]);
    Ok(())
}

/// A subalgebra of sl₂ or of a weighted plane, and a choice of modules on both sides.
pub fn random_adjunction() -> impl Strategy<Value = (usize, bool, bool)> {
    (0usize..4, any::<bool>(), any::<bool>())
}

fn adjunction_instance(which: usize) -> AlgebraMorphism<Q> {
    match which {
        0 => sl2::<Q>().subalgebra(&[1, 2]).unwrap().1,
        1 => sl2::<Q>().subalgebra(&[0, 1]).unwrap().1,
        2 => abelian_lie::<Q>(vec![-1, 1]).subalgebra(&[0]).unwrap().1,
        _ => AlgebraMorphism::identity(&abelian_lie::<Q>(vec![1, 2])),
    }
}

pub fn adjunction((which, free_source, regular_target): (usize, bool, bool)) -> Result<(), TestCaseError> {
    let f = adjunction_instance(which);
    let m = if free_source { regular_module(&f.source) } else { trivial_module(&f.source) };
    let n = if regular_target { regular_module(&f.target) } else { trivial_module(&f.target) };
    let induced = induce_module(&f, &m, 3).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let left = graded_hom_space(&induced, &n).len();
    let right = graded_hom_space(&m, &restrict_module(&f, &n)).len();
    prop_assert_eq!(left, right);
    let laws = cotriple_from_adjunction(&f).and_then(|c| c.check_laws(&regular_module(&f.target), 3)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(laws.holds(), "{:?}", laws.failures);
    Ok(())
}

/// Up to four relations in an ambient space of dimension ≤ 6.
pub fn random_relations() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=6).prop_flat_map(|d| (Just(d), prop::collection::vec(prop::collection::vec(-2i64..=2, d), 0..=4)))
}

pub fn coinvariant_projector((dim, rels): (usize, Vec<Vec<i64>>)) -> Result<(), TestCaseError> {
    let vecs: Vec<SVec<Q>> = rels.iter().map(|r| r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, Q::from_i64(*x))).collect()).collect();
    let c = Coinvariants::from_relations(dim, vecs.clone().into_iter());
    let section = SparseMatrix::from_triplets(dim, c.dim(), c.basis.iter().enumerate().map(|(i, &b)| (b, i, Q::from_i64(1))));
    prop_assert_eq!(c.projection.mul(&section), SparseMatrix::identity(c.dim()));
    let e = section.mul(&c.projection);
    prop_assert_eq!(e.mul(&e), e);
    for v in &vecs {
        prop_assert!(c.projection.apply(v).is_empty());
    }
    let rank = SparseMatrix::from_rows(dim, vecs).rank();
    prop_assert_eq!(rank + c.dim(), dim);
    Ok(())
}

/// Runs every invariant with the fixed seed; one entry per family.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    fn go<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
        TestRunner::new(config(cases)).run(&s, f).map_err(|e| e.to_string())
    }
    vec![
        ("operad axioms", go(cases, random_presentation(), operad_axioms)),
        ("simplicial identities", go(cases, random_bar_instance(), simplicial_identities)),
        ("d² = 0", go(cases, random_scaling(), square_zero)),
        ("adjunction naturality", go(cases, random_adjunction(), adjunction)),
        ("coinvariant projector idempotence", go(cases, random_relations(), coinvariant_projector)),
    ]
}
