mod support;

use std::collections::BTreeMap;

use opalg::palgebra::{abelian_lie, trivial_module};
use opalg::seminf::{semiinfinite_complex, semiinfinite_homology, SemiInfiniteStructure};
use opalg::{Rational, Scalar, F7};

fn plane<F: Scalar>() -> SemiInfiniteStructure<F> {
    SemiInfiniteStructure::from_basis(&abelian_lie(vec![-1, 1]), &[0], &[1]).unwrap()
}

#[test]
fn cell_dimensions_match_bookkeeping() {
    let s = plane::<Rational>();
    let k = trivial_module(&s.algebra);
    for w in -2..=2 {
        let c = semiinfinite_complex(&s, &k, w, (-2, 2), 4).unwrap();
        let ours: BTreeMap<(usize, usize), usize> = c.cells.iter().filter(|(_, d)| **d > 0).map(|(k, d)| (*k, *d)).collect();
        assert_eq!(ours, support::oracle::abelian_plane(w).cell_dims((-2, 2)), "weight {}", w);
    }
    // Frozen from the bookkeeping oracle at weight 0.
    let c = semiinfinite_complex(&s, &k, 0, (-2, 2), 4).unwrap();
    let frozen: BTreeMap<i64, usize> = [(-2, 1), (-1, 1), (0, 3), (1, 1), (2, 1)].into();
    assert_eq!(c.dims(), frozen);
}

#[test]
fn homology_matches_oracle_over_a_prime_field() {
    let s = plane::<F7>();
    let k = trivial_module(&s.algebra);
    for w in -2..=2 {
        let ours = semiinfinite_homology(&s, &k, w, (-3, 3), 4).unwrap();
        let oracle = support::oracle::abelian_plane(w);
        for n in -2..=2 {
            assert_eq!(ours.dims[&n], oracle.betti(n), "weight {} degree {}", w, n);
        }
    }
}

#[test]
fn euler_characteristic_is_additive() {
    let s = plane::<Rational>();
    let k = trivial_module(&s.algebra);
    for w in -2..=2 {
        let c = semiinfinite_complex(&s, &k, w, (-3, 3), 4).unwrap();
        let cells: i64 = c.cells.iter().map(|((p, q), d)| if (*q as i64 - *p as i64) % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
        assert_eq!(c.euler_characteristic(), cells);
        let h = semiinfinite_homology(&s, &k, w, (-3, 3), 4).unwrap();
        let betti: i64 = h.dims.iter().map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
        // Euler characteristic of a truncated complex: homology counts only differ at the edges.
        let interior = (-2..=2).all(|n| h.dims[&n] == c.complex.betti(n));
        assert!(interior);
        assert_eq!(betti, c.euler_characteristic());
    }
}
