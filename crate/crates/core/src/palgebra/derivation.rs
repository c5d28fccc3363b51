use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::exactalg::{accumulate, svec_from_map, Rref, SVec, Scalar, SparseMatrix};
use crate::operad_core::ClassicalOperad;
use crate::Error;

use super::algebra::{check_algebra, AlgebraMorphism, PAlgebra};
use super::envelope::enveloping_algebra;
use super::module::{free_module_over, quotient_module, restrict_module, PModule};

/// Basis of `Der_A(B, E)`, each derivation homogeneous of the recorded weight shift.
#[derive(Clone, Debug)]
pub struct Derivations<F: Scalar> {
    /// `E.dim() × B.dim()` matrices.
    pub maps: Vec<SparseMatrix<F>>,
    pub shifts: Vec<i64>,
}

impl<F: Scalar> Derivations<F> {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn by_shift(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &s in &self.shifts {
            *out.entry(s).or_insert(0) += 1;
        }
        out
    }
}

/// Derivations `θ: B → E` along `f: B → A`, i.e. `θ(μ(x, y))` expanded by the Leibniz rule of the
/// operad with `B` acting on `E` through `f`.
pub fn derivations<F: Scalar>(f: &AlgebraMorphism<F>, e: &PModule<F>) -> Derivations<F> {
    let b = &f.source;
    let n = b.dim();
    let pulled = restrict_module(f, e);
    let act = |g: usize| &pulled.actions[g];
    let shifts: BTreeSet<i64> = e.weights.iter().flat_map(|we| b.weights.iter().map(move |wb| we - wb)).collect();
    let mut maps = Vec::new();
    let mut out_shifts = Vec::new();
    for s in shifts {
        let mut unknowns = Vec::new();
        let mut index = HashMap::new();
        for r in 0..e.dim() {
            for c in 0..n {
                if e.weights[r] - b.weights[c] == s {
                    index.insert((r, c), unknowns.len());
                    unknowns.push((r, c));
                }
            }
        }
        // Row r of θ(v) as a combination of unknowns.
        let theta = |eqs: &mut BTreeMap<usize, BTreeMap<usize, F>>, coef: &F, v: &[(usize, F)]| {
            for (c, x) in v {
                for r in 0..e.dim() {
                    if let Some(&u) = index.get(&(r, *c)) {
                        accumulate(eqs.entry(r).or_default(), &(coef.clone() * x.clone()), &[(u, F::one())]);
                    }
                }
            }
        };
        // Row r of ρ θ(e_j).
        let acted = |eqs: &mut BTreeMap<usize, BTreeMap<usize, F>>, coef: &F, rho: &SparseMatrix<F>, j: usize| {
            for (r, t, x) in rho.entries() {
                if let Some(&u) = index.get(&(t, j)) {
                    accumulate(eqs.entry(r).or_default(), &(coef.clone() * x.clone()), &[(u, F::one())]);
                }
            }
        };
        let mut rows = Vec::new();
        let one = F::one();
        let minus = -F::one();
        for i in 0..n {
            for j in 0..n {
                let mut eqs = BTreeMap::new();
                theta(&mut eqs, &one, &b.mul(i, j));
                match b.kind {
                    ClassicalOperad::Lie => {
                        acted(&mut eqs, &minus, act(i), j);
                        acted(&mut eqs, &one, act(j), i);
                    }
                    ClassicalOperad::Com => {
                        acted(&mut eqs, &minus, act(i), j);
                        acted(&mut eqs, &minus, act(j), i);
                    }
                    ClassicalOperad::Asc => {
                        acted(&mut eqs, &minus, act(i), j);
                        acted(&mut eqs, &minus, act(n + j), i);
                    }
                }
                rows.extend(eqs.into_values().map(svec_from_map).filter(|v| !v.is_empty()));
            }
        }
        for v in Rref::of_rows(unknowns.len(), rows.into_iter()).kernel_basis() {
            maps.push(SparseMatrix::from_triplets(
                e.dim(),
                n,
                v.into_iter().map(|(u, c)| (unknowns[u].0, unknowns[u].1, c)),
            ));
            out_shifts.push(s);
        }
    }
    Derivations { maps, shifts: out_shifts }
}

/// Kähler differentials: the free module on symbols `dx` modulo the Leibniz relations and their
/// `U(A)`-multiples, truncated at `bound` for Lie algebras.
pub fn kahler<F: Scalar>(a: &PAlgebra<F>, bound: usize) -> Result<PModule<F>, Error> {
    check_algebra(a)?;
    let n = a.dim();
    let u = enveloping_algebra(a, bound)?;
    let names: Vec<String> = a.names.iter().map(|x| format!("d{}", x)).collect();
    let free = free_module_over(&u, &names, &a.weights);
    let ua = &u.algebra;
    let at = |p: usize, k: usize| p * n + k;
    // (U-element) ⊗ dx_k
    let tensor = |acc: &mut BTreeMap<usize, F>, coef: &F, uvec: &SVec<F>, k: usize| {
        for (p, c) in uvec {
            accumulate(acc, &(coef.clone() * c.clone()), &[(at(*p, k), F::one())]);
        }
    };
    let mut relations = Vec::new();
    for p in 0..ua.dim() {
        if ua.bound.is_some_and(|b| ua.filtration[p] + 1 > b) {
            continue;
        }
        let unit = vec![(p, F::one())];
        let times = |g: usize| ua.mul_vec(&unit, &u.generators[g]).expect("within bound");
        for i in 0..n {
            for j in 0..n {
                let mut acc = BTreeMap::new();
                for (k, c) in a.mul(i, j) {
                    tensor(&mut acc, &c, &unit, k);
                }
                let minus = -F::one();
                match a.kind {
                    ClassicalOperad::Lie => {
                        tensor(&mut acc, &minus, &times(i), j);
                        tensor(&mut acc, &F::one(), &times(j), i);
                    }
                    ClassicalOperad::Com => {
                        tensor(&mut acc, &minus, &times(i), j);
                        tensor(&mut acc, &minus, &times(j), i);
                    }
                    ClassicalOperad::Asc => {
                        tensor(&mut acc, &minus, &times(i), j);
                        tensor(&mut acc, &minus, &times(n + j), i);
                    }
                }
                relations.push(svec_from_map(acc));
            }
        }
    }
    Ok(quotient_module(&free, relations))
}
