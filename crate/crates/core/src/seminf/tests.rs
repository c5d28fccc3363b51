use std::collections::BTreeMap;

use super::*;
use crate::exactalg::{ChainComplex, Direction, SparseMatrix};
use crate::palgebra::{abelian_lie, regular_module, sl2, trivial_module, AlgebraMorphism};
use crate::relhom::{bar_simplicial, relative_homology, RightModule};
use crate::{Rational, Scalar, F7};

type Q = Rational;

fn triangular<F: Scalar>() -> SemiInfiniteStructure<F> {
    // B = span{h, f}, N = span{e}.
    SemiInfiniteStructure::from_basis(&sl2(), &[1, 2], &[0]).unwrap()
}

fn abelian_pair<F: Scalar>() -> SemiInfiniteStructure<F> {
    SemiInfiniteStructure::from_basis(&abelian_lie(vec![-1, 1]), &[0], &[1]).unwrap()
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Normalized two-sided bar for 𝕜[x₋, x₊] with B = ⟨x₋⟩, N = ⟨x₊⟩ and M = 𝕜, written out on
/// exponent sequences. Every action on 𝕜 and on the adjoint module vanishes, so the only surviving
/// faces merge neighbouring exponents.
fn oracle_homology(weight: i64) -> BTreeMap<i64, usize> {
    let vs = [-1i64, 1];
    // Cell (p, q): (a, v, b, v') with weight −(Σa + v) + (−Σb + v') = weight.
    type Basis = Vec<(Vec<usize>, i64, Vec<usize>, i64)>;
    let reach = (2 - weight).max(0) as usize;
    let mut cells: BTreeMap<(usize, usize), Basis> = BTreeMap::new();
    for sa in 0..=reach {
        for sb in 0..=(reach - sa) {
            for p in 0..=sa {
                for q in 0..=sb {
                    for a in compositions(sa, p) {
                        for b in compositions(sb, q) {
                            for &v in &vs {
                                for &v2 in &vs {
                                    if -(sa as i64 + v) + (-(sb as i64) + v2) == weight {
                                        cells.entry((p, q)).or_default().push((a.clone(), v, b.clone(), v2));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let merges = |s: &[usize]| -> Vec<(Vec<usize>, i64)> {
        (1..s.len())
            .map(|i| {
                let mut t = s[..i - 1].to_vec();
                t.push(s[i - 1] + s[i]);
                t.extend_from_slice(&s[i + 1..]);
                (t, if i % 2 == 1 { -1 } else { 1 })
            })
            .collect()
    };
    let mut degrees: BTreeMap<i64, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for ((p, q), basis) in &cells {
        for i in 0..basis.len() {
            degrees.entry(*q as i64 - *p as i64).or_default().push((*p, *q, i));
        }
    }
    let position = |n: i64, key: &(usize, usize, usize)| degrees[&n].iter().position(|k| k == key).unwrap();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (n, elems) in &degrees {
        dims.insert(*n, elems.len());
        if !degrees.contains_key(&(n - 1)) {
            continue;
        }
        let mut triplets = Vec::new();
        for (col, &(p, q, i)) in elems.iter().enumerate() {
            let (a, v, b, v2) = &cells[&(p, q)][i];
            // δ: a basis functional on a is hit by every longer sequence merging onto it,
            // (δφ)(a') = Σ_i (−1)^i φ(merge_i a').
            if let Some(target) = cells.get(&(p + 1, q)) {
                for (j, (a2, w, b2, w2)) in target.iter().enumerate() {
                    if w == v && b2 == b && w2 == v2 {
                        for (m, s) in merges(a2) {
                            if &m == a {
                                triplets.push((position(n - 1, &(p + 1, q, j)), col, s));
                            }
                        }
                    }
                }
            }
            if let Some(target) = cells.get(&(p, q.wrapping_sub(1))) {
                let sign = if p % 2 == 1 { -1 } else { 1 };
                for (m, s) in merges(b) {
                    let j = target.iter().position(|(a2, w, b2, w2)| a2 == a && w == v && *b2 == m && w2 == v2).unwrap();
                    triplets.push((position(n - 1, &(p, q - 1, j)), col, sign * s));
                }
            }
        }
        let rows = degrees[&(n - 1)].len();
        diffs.insert(*n, SparseMatrix::from_triplets(rows, elems.len(), triplets.into_iter().map(|(r, c, x)| (r, c, Q::from_i64(x)))));
    }
    let c = ChainComplex::new(Direction::Chain, dims, diffs).unwrap();
    (-2..=2).map(|n| (n, if c.dims().contains_key(&n) { c.betti(n) } else { 0 })).collect()
}

#[test]
fn triangular_sl2_is_semi_infinite() {
    let cert = validate_semiinfinite(&triangular::<Q>(), 4);
    assert!(cert.passed(), "{:?}", cert.conditions);
    // f·e = e·f − h: k runs from 0 (e⊗f) to 2 (1⊗h).
    let cell = cert.k_table.iter().find(|c| c.base_weight == -2 && c.complement_weight == 2).unwrap();
    assert_eq!((cell.k_min, cell.k_max), (0, 2));
    assert!(cell.witness_max.contains('h'), "{}", cell.witness_max);
    assert_eq!(cert.complement_dims[&4], 1);
}

#[test]
fn abelian_pair_straightens_by_the_flip() {
    let cert = validate_semiinfinite(&abelian_pair::<Q>(), 4);
    assert!(cert.passed());
    assert!(!cert.k_table.is_empty());
    assert!(cert.k_table.iter().all(|c| c.k_min == 0 && c.k_max == 0));
}

#[test]
fn swapped_grading_fails() {
    let s = SemiInfiniteStructure::<Q>::from_basis(&sl2(), &[0], &[1, 2]).unwrap();
    let cert = validate_semiinfinite(&s, 4);
    assert!(!cert.passed());
    // U(⟨f, h⟩) has negative weights and U(⟨e⟩) positive ones.
    assert_eq!(cert.violated(), vec![2, 3]);
    assert!(cert.conditions[2].witness.as_ref().unwrap().contains('e'));
}

#[test]
fn missing_cartan_fails_factorization() {
    let g = sl2::<Q>();
    let base = AlgebraMorphism::new(
        crate::palgebra::PAlgebra::zero(crate::operad_core::ClassicalOperad::Lie, vec!["f".into()], vec![-2]),
        g.clone(),
        SparseMatrix::from_triplets(3, 1, [(2, 0, Q::from_i64(1))]),
    )
    .unwrap();
    let s = SemiInfiniteStructure::new(base, g.subalgebra(&[0]).unwrap().1).unwrap();
    let cert = validate_semiinfinite(&s, 2);
    assert_eq!(cert.violated(), vec![4]);
    assert_eq!(cert.conditions[4].status, Status::NotEvaluated);
}

#[test]
fn abelian_complex_matches_brute_force_oracle() {
    let s = abelian_pair::<Q>();
    let k = trivial_module(&s.algebra);
    for w in -2..=2 {
        let h = semiinfinite_homology(&s, &k, w, (-3, 3), 4).unwrap();
        let ours: BTreeMap<i64, usize> = (-2..=2).map(|n| (n, h.dims[&n])).collect();
        assert_eq!(ours, oracle_homology(w), "weight {}", w);
        assert_eq!(h.unverified, vec![-3, 3]);
    }
    // Frozen from the oracle, summed over |w| ≤ 2.
    let total: BTreeMap<i64, usize> = (-2..=2).fold(BTreeMap::new(), |mut acc, w| {
        for (n, d) in oracle_homology(w) {
            *acc.entry(n).or_insert(0) += d;
        }
        acc
    });
    assert_eq!(total, [(-2, 0), (-1, 3), (0, 7), (1, 3), (2, 0)].into());
}

#[test]
fn window_growth_leaves_the_interior_unchanged() {
    let s = abelian_pair::<Q>();
    let k = trivial_module(&s.algebra);
    for w in -1..=1 {
        let small = semiinfinite_homology(&s, &k, w, (-2, 2), 4).unwrap();
        let large = semiinfinite_homology(&s, &k, w, (-3, 3), 4).unwrap();
        for n in -1..=1 {
            assert_eq!(small.dims[&n], large.dims[&n]);
        }
    }
}

#[test]
fn sl2_complex_is_a_complex() {
    let s = triangular::<Q>();
    let k = trivial_module(&s.algebra);
    let c = semiinfinite_complex(&s, &k, 0, (-2, 2), 4).unwrap();
    assert!(c.complex.check_square_zero().is_ok());
    assert!(!c.complete());
    let alternating: i64 = c.dims().iter().map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
    assert_eq!(c.euler_characteristic(), alternating);
    let homology: i64 = (-2..=2).map(|n| if n % 2 == 0 { c.complex.betti(n) as i64 } else { -(c.complex.betti(n) as i64) }).sum();
    assert_eq!(homology, alternating);
    let cell_sum: usize = c.cells.values().sum();
    assert_eq!(cell_sum, c.dims().values().sum::<usize>());
}

#[test]
fn whole_algebra_as_base_gives_relative_homology() {
    let a = abelian_lie::<Q>(vec![-1]);
    let s = SemiInfiniteStructure::new(AlgebraMorphism::identity(&a), AlgebraMorphism::from_zero(&a)).unwrap();
    assert!(validate_semiinfinite(&s, 4).passed());
    let k = trivial_module(&a);
    let mut total: BTreeMap<i64, usize> = BTreeMap::new();
    for w in -5..=1 {
        for (n, d) in semiinfinite_homology(&s, &k, w, (-1, 3), 4).unwrap().dims {
            if (0..=2).contains(&n) {
                *total.entry(n).or_insert(0) += d;
            }
        }
    }
    let rel = relative_homology(&AlgebraMorphism::from_zero(&a), &RightModule::trivial(&a), 3, 6).unwrap();
    assert_eq!(total, rel.totals());
}

#[test]
fn noncommutative_coefficients_rejected() {
    let s = triangular::<Q>();
    let err = semiinfinite_complex(&s, &regular_module(&s.algebra), 0, (-1, 1), 4).unwrap_err();
    assert!(matches!(err, crate::Error::Config(_)), "{:?}", err);
    let swapped = SemiInfiniteStructure::<Q>::from_basis(&sl2(), &[0], &[1, 2]).unwrap();
    assert!(semiinfinite_complex(&swapped, &trivial_module(&swapped.algebra), 0, (-1, 1), 4).is_err());
}

#[test]
fn resolution_properties_hold() {
    for s in [triangular::<Q>(), abelian_pair::<Q>()] {
        let r = resolution_property_checks(&s, 3, 4).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.checks.iter().map(|c| c.label).collect::<String>(), "abc");
    }
}

#[test]
fn corrupted_face_is_detected() {
    let s = triangular::<Q>();
    let mut bar = bar_simplicial(&s.base, &regular_module(&s.algebra), 3, 4).unwrap();
    assert!(augmentation_exactness(&bar).holds);
    let c = bar.components.get_mut(&0).unwrap();
    c.augmentation = SparseMatrix::zero(c.augmentation.rows(), c.augmentation.cols());
    let check = augmentation_exactness(&bar);
    assert!(!check.holds);
    assert!(check.witness.unwrap().starts_with("weight 0, degree -1"));
}

#[test]
fn prime_field_matches_rationals() {
    let s = abelian_pair::<F7>();
    let k = trivial_module(&s.algebra);
    let h = semiinfinite_homology(&s, &k, 0, (-3, 3), 4).unwrap();
    let hq = semiinfinite_homology(&abelian_pair::<Q>(), &trivial_module(&abelian_lie(vec![-1, 1])), 0, (-3, 3), 4).unwrap();
    assert_eq!(h.dims, hq.dims);
}
