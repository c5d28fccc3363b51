use std::collections::BTreeMap;

use super::*;
use crate::operad_core::{classical_operad, classical_presentation, koszul_dual_cooperad, ClassicalOperad};
use crate::{Rational, Scalar};

type Q = Rational;

#[test]
fn kappa_is_a_twisting_morphism() {
    for kind in ClassicalOperad::ALL {
        let q = classical_operad::<Q>(kind, 4).unwrap();
        let kd = koszul_dual_cooperad(&classical_presentation(kind), 4).unwrap();
        let conv = Convolution::new(&kd.cooperad, &q.operad).unwrap();
        let kappa = koszul_morphism(&kd, &q);
        conv.validate(&kappa).unwrap();
        assert!(conv.star(&kappa, &kappa).unwrap().is_zero(), "{kind}");
        assert!(!kappa.is_zero());
        assert!(conv.star(&kappa, &conv.zero(-1)).unwrap().is_zero());
    }
}

#[test]
fn koszul_complexes_are_acyclic() {
    for kind in ClassicalOperad::ALL {
        let rep = koszulness_certificate::<Q>(&classical_presentation(kind), 4).unwrap();
        for a in &rep.arities {
            assert!(a.left_acyclic, "{kind} left arity {}: {:?}", a.arity, a.left_homology);
            assert!(a.right_acyclic, "{kind} right arity {}: {:?}", a.arity, a.right_homology);
            assert!(a.inclusion_quasi_iso, "{kind} inclusion arity {}", a.arity);
        }
        assert!(rep.verified() && rep.conditions_agree());
    }
}

#[test]
fn bar_differentials_square_to_zero_and_coderive() {
    for (kind, max) in [(ClassicalOperad::Lie, 4), (ClassicalOperad::Com, 4), (ClassicalOperad::Asc, 4)] {
        let q = classical_operad::<Q>(kind, max).unwrap();
        let b = bar(&q.operad).unwrap();
        b.cooperad.check_axioms().unwrap();
    }
}

#[test]
fn bar_of_lie_small_arities() {
    let q = classical_operad::<Q>(ClassicalOperad::Lie, 3).unwrap();
    let b = bar(&q.operad).unwrap();
    let (c2, _) = b.complex(2).unwrap();
    assert_eq!(c2.dims(), &BTreeMap::from([(1, 1)]));
    assert_eq!(c2.homology_dims(), BTreeMap::from([(1, 1)]));
    let (c3, _) = b.complex(3).unwrap();
    assert_eq!(c3.dims(), &BTreeMap::from([(1, 2), (2, 3)]));
    let h: BTreeMap<i64, usize> = c3.homology_dims().into_iter().filter(|x| x.1 > 0).collect();
    assert_eq!(h, BTreeMap::from([(2, 1)]));
}

#[test]
fn cobar_of_koszul_dual_resolves() {
    for kind in [ClassicalOperad::Lie, ClassicalOperad::Com, ClassicalOperad::Asc] {
        let q = classical_operad::<Q>(kind, 3).unwrap();
        let kd = koszul_dual_cooperad::<Q>(&classical_presentation(kind), 3).unwrap();
        let cb = cobar(&kd.cooperad).unwrap();
        cb.operad.check_axioms().unwrap();
        for n in 1..=3 {
            let (c, _) = cb.complex(n).unwrap();
            let h: BTreeMap<i64, usize> = c.homology_dims().into_iter().filter(|x| x.1 > 0).collect();
            assert_eq!(h, BTreeMap::from([(0, q.operad.dim(n))]), "{kind} arity {n}");
        }
        let (c2, _) = cb.complex(2).unwrap();
        assert!(c2.differential(0).is_zero());
    }
}

#[test]
fn counit_is_a_quasi_isomorphism() {
    for kind in [ClassicalOperad::Com, ClassicalOperad::Lie] {
        let q = classical_operad::<Q>(kind, 3).unwrap();
        for n in 1..=3 {
            let cmp = counit_comparison(&q.operad, n).unwrap();
            assert!(cmp.is_quasi_isomorphism(), "{kind} arity {n}: {cmp:?}");
        }
    }
}

#[test]
fn twisted_composite_with_zero_morphism_has_zero_differential() {
    let q = classical_operad::<Q>(ClassicalOperad::Com, 3).unwrap();
    let kd = koszul_dual_cooperad(&classical_presentation(ClassicalOperad::Com), 3).unwrap();
    let conv = Convolution::new(&kd.cooperad, &q.operad).unwrap();
    let zero = TwistingMorphism::new(&conv, conv.zero(-1)).unwrap();
    for side in [Side::Left, Side::Right] {
        let tc = twisted_composite(&kd.cooperad, &q.operad, &zero, side, 3).unwrap();
        let total: usize = tc.complex.dims().values().sum();
        assert_eq!(tc.complex.homology_dims().values().sum::<usize>(), total);
    }
}

fn random_element(conv: &Convolution<'_, Q>, degree: i64, rng: &mut impl rand::Rng) -> ConvolutionElement<Q> {
    let mut f = conv.zero(degree);
    for n in 1..=conv.max_arity() {
        let mut entries = Vec::new();
        for c in 0..conv.cooperad.dim(n) {
            for p in 0..conv.operad.dim(n) {
                if conv.operad.degree(n, p) == conv.cooperad.degree(n, c) + degree && rng.gen_bool(0.5) {
                    entries.push((p, c, Q::from_i64(rng.gen_range(-3..=3))));
                }
            }
        }
        f.maps[n] = crate::exactalg::SparseMatrix::from_triplets(conv.operad.dim(n), conv.cooperad.dim(n), entries);
    }
    conv.symmetrize(&f)
}

#[test]
fn convolution_is_a_dg_prelie_algebra() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let q = classical_operad::<Q>(ClassicalOperad::Com, 4).unwrap();
    let b = bar(&q.operad).unwrap();
    let conv = Convolution::new(&b.cooperad, &q.operad).unwrap();
    let sgn = |odd: bool| if odd { -Q::from_i64(1) } else { Q::from_i64(1) };
    for _ in 0..3 {
        let f = random_element(&conv, -1, &mut rng);
        let g = random_element(&conv, -2, &mut rng);
        let h = random_element(&conv, -1, &mut rng);
        conv.validate(&f).unwrap();
        // ∂² = 0
        assert!(conv.derivative(&conv.derivative(&g).unwrap()).unwrap().is_zero());
        // Leibniz
        let lhs = conv.derivative(&conv.star(&f, &g).unwrap()).unwrap();
        let rhs = conv
            .star(&conv.derivative(&f).unwrap(), &g)
            .unwrap()
            .add(&conv.star(&f, &conv.derivative(&g).unwrap()).unwrap().scale(&sgn(f.degree.rem_euclid(2) == 1)));
        assert_eq!(lhs, rhs);
        // Right pre-Lie identity: the associator is graded symmetric in its last two entries.
        let assoc = |x: &ConvolutionElement<Q>, y: &ConvolutionElement<Q>, z: &ConvolutionElement<Q>| {
            let a = conv.star(&conv.star(x, y).unwrap(), z).unwrap();
            let b = conv.star(x, &conv.star(y, z).unwrap()).unwrap();
            a.add(&b.scale(&-Q::from_i64(1)))
        };
        let odd = (g.degree * h.degree).rem_euclid(2) == 1;
        assert_eq!(assoc(&f, &g, &h), assoc(&f, &h, &g).scale(&sgn(odd)));
        // Antisymmetry of the bracket.
        let fg = conv.bracket(&f, &g).unwrap();
        let gf = conv.bracket(&g, &f).unwrap();
        assert_eq!(fg, gf.scale(&-sgn((f.degree * g.degree).rem_euclid(2) == 1)));
    }
}

#[test]
fn twisting_morphism_rejects_non_solutions() {
    let q = classical_operad::<Q>(ClassicalOperad::Lie, 3).unwrap();
    let kd = koszul_dual_cooperad::<Q>(&classical_presentation(ClassicalOperad::Lie), 3).unwrap();
    let conv = Convolution::new(&kd.cooperad, &q.operad).unwrap();
    let kappa = koszul_morphism(&kd, &q);
    assert!(TwistingMorphism::new(&conv, kappa.scale(&Q::from_i64(2))).is_ok());
    assert!(TwistingMorphism::new(&conv, conv.zero(0)).is_err());
}
