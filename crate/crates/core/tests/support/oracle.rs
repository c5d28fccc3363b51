//! Brute-force two-sided bar complex for 𝕜[x, y] with x of weight −1 (base side), y of weight +1
//! (complement side) and trivial coefficients. Cochains on the base side are functionals on
//! exponent sequences; chains on the complement side are exponent sequences. Both adjoint actions
//! and the action on 𝕜 vanish, so the only faces that survive normalization merge neighbours.

use std::collections::BTreeMap;

use opalg::exactalg::{ChainComplex, Direction, SparseMatrix};
use opalg::{Rational, Scalar};

/// (base exponents, base tail weight, complement exponents, complement tail weight)
pub type Cell = (Vec<usize>, i64, Vec<usize>, i64);

pub struct Oracle {
    pub cells: BTreeMap<(usize, usize), Vec<Cell>>,
    pub complex: ChainComplex<Rational>,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (1..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn merges(s: &[usize]) -> Vec<(Vec<usize>, i64)> {
    (1..s.len())
        .map(|i| {
            let mut t = s[..i - 1].to_vec();
            t.push(s[i - 1] + s[i]);
            t.extend_from_slice(&s[i + 1..]);
            (t, if i % 2 == 1 { -1 } else { 1 })
        })
        .collect()
}

/// The whole (finite) complex of one weight.
pub fn abelian_plane(weight: i64) -> Oracle {
    let tails = [-1i64, 1];
    let reach = (2 - weight).max(0) as usize;
    let mut cells: BTreeMap<(usize, usize), Vec<Cell>> = BTreeMap::new();
    for sa in 0..=reach {
        for sb in 0..=reach - sa {
            for p in 0..=sa {
                for q in 0..=sb {
                    for a in compositions(sa, p) {
                        for b in compositions(sb, q) {
                            for &v in &tails {
                                for &v2 in &tails {
                                    if -(sa as i64 + v) - sb as i64 + v2 == weight {
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
    let mut degrees: BTreeMap<i64, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for ((p, q), basis) in &cells {
        for i in 0..basis.len() {
            degrees.entry(*q as i64 - *p as i64).or_default().push((*p, *q, i));
        }
    }
    let position = |n: i64, key: (usize, usize, usize)| degrees[&n].iter().position(|k| *k == key).unwrap();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (n, elems) in &degrees {
        dims.insert(*n, elems.len());
        let Some(targets) = degrees.get(&(n - 1)) else { continue };
        let mut triplets = Vec::new();
        for (col, &(p, q, i)) in elems.iter().enumerate() {
            let (a, v, b, v2) = &cells[&(p, q)][i];
            if let Some(up) = cells.get(&(p + 1, q)) {
                for (j, (a2, w, b2, w2)) in up.iter().enumerate() {
                    if w == v && b2 == b && w2 == v2 {
                        for (m, s) in merges(a2) {
                            if &m == a {
                                triplets.push((position(n - 1, (p + 1, q, j)), col, s));
                            }
                        }
                    }
                }
            }
            if q > 1 {
                let down = &cells[&(p, q - 1)];
                let sign = if p % 2 == 1 { -1 } else { 1 };
                for (m, s) in merges(b) {
                    let j = down.iter().position(|(a2, w, b2, w2)| a2 == a && w == v && *b2 == m && w2 == v2).unwrap();
                    triplets.push((position(n - 1, (p, q - 1, j)), col, sign * s));
                }
            }
        }
        let entries = triplets.into_iter().map(|(r, c, x)| (r, c, Rational::from_i64(x)));
        diffs.insert(*n, SparseMatrix::from_triplets(targets.len(), elems.len(), entries));
    }
    Oracle { cells, complex: ChainComplex::new(Direction::Chain, dims, diffs).expect("oracle complex squares to zero") }
}

impl Oracle {
    pub fn betti(&self, n: i64) -> usize {
        if self.complex.dims().contains_key(&n) {
            self.complex.betti(n)
        } else {
            0
        }
    }

    /// Cell dimensions with q − p inside the window.
    pub fn cell_dims(&self, window: (i64, i64)) -> BTreeMap<(usize, usize), usize> {
        self.cells
            .iter()
            .filter(|((p, q), _)| (window.0..=window.1).contains(&(*q as i64 - *p as i64)))
            .map(|(k, v)| (*k, v.len()))
            .collect()
    }
}
