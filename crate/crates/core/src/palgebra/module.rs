use std::collections::{BTreeMap, HashMap};

use crate::exactalg::{accumulate, svec_from_map, Rref, SVec, Scalar, SparseMatrix};
use crate::operad_core::ClassicalOperad;
use crate::symcore::Coinvariants;
use crate::Error;

use super::algebra::{check_algebra, AlgebraMorphism, PAlgebra};
use super::envelope::{enveloping_algebra, Enveloping};

/// Left module over `U(A)`, given by the action of the generators of `U(A)` (see
/// [`Enveloping::generators`]). Truncated modules carry a filtration and a bound: actions on basis
/// vectors of filtration `bound` are cut off above the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct PModule<F: Scalar> {
    pub kind: ClassicalOperad,
    pub names: Vec<String>,
    pub weights: Vec<i64>,
    pub filtration: Vec<usize>,
    pub bound: Option<usize>,
    pub actions: Vec<SparseMatrix<F>>,
}

fn generator_weights<F: Scalar>(a: &PAlgebra<F>) -> Vec<i64> {
    match a.kind {
        ClassicalOperad::Asc => a.weights.iter().chain(a.weights.iter()).copied().collect(),
        _ => a.weights.clone(),
    }
}

fn generator_count<F: Scalar>(a: &PAlgebra<F>) -> usize {
    generator_weights(a).len()
}

impl<F: Scalar> PModule<F> {
    /// Untruncated module from action matrices.
    pub fn new(kind: ClassicalOperad, names: Vec<String>, weights: Vec<i64>, actions: Vec<SparseMatrix<F>>) -> Self {
        let n = names.len();
        PModule { kind, names, weights, filtration: vec![0; n], bound: None, actions }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn act(&self, g: usize, v: &[(usize, F)]) -> SVec<F> {
        self.actions[g].apply(v)
    }

    /// Whether `k` successive actions on basis vector `j` are computed without truncation.
    pub fn exact_for(&self, j: usize, k: usize) -> bool {
        self.bound.map_or(true, |b| self.filtration[j] + k <= b)
    }

    pub fn weight_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &w in &self.weights {
            *out.entry(w).or_insert(0) += 1;
        }
        out
    }
}

/// The one-dimensional module on which `A` acts by zero.
pub fn trivial_module<F: Scalar>(a: &PAlgebra<F>) -> PModule<F> {
    let actions = (0..generator_count(a)).map(|_| SparseMatrix::zero(1, 1)).collect();
    PModule::new(a.kind, vec!["1".into()], vec![0], actions)
}

/// `A` acting on itself: adjoint action for Lie, multiplication for Com, both sides for Asc.
pub fn regular_module<F: Scalar>(a: &PAlgebra<F>) -> PModule<F> {
    let n = a.dim();
    let left = |i: usize| SparseMatrix::from_columns(n, &(0..n).map(|j| a.mul(i, j)).collect::<Vec<_>>());
    let right = |i: usize| SparseMatrix::from_columns(n, &(0..n).map(|j| a.mul(j, i)).collect::<Vec<_>>());
    let mut actions: Vec<SparseMatrix<F>> = (0..n).map(left).collect();
    if a.kind == ClassicalOperad::Asc {
        actions.extend((0..n).map(right));
    }
    PModule::new(a.kind, a.names.clone(), a.weights.clone(), actions)
}

/// Lists failures of the module axioms, checked on basis vectors where two actions are exact.
pub fn validate_module<F: Scalar>(a: &PAlgebra<F>, m: &PModule<F>) -> Vec<String> {
    let mut out = Vec::new();
    let gw = generator_weights(a);
    if m.kind != a.kind || m.actions.len() != gw.len() {
        out.push(format!("module has {} actions, the algebra {} generators", m.actions.len(), gw.len()));
        return out;
    }
    for (g, act) in m.actions.iter().enumerate() {
        if act.shape() != (m.dim(), m.dim()) {
            out.push(format!("action {} has shape {:?}", g, act.shape()));
            return out;
        }
        for (r, c, _) in act.entries() {
            if m.weights[r] != m.weights[c] + gw[g] {
                out.push(format!("action {} does not shift weight by {} on {}", g, gw[g], m.names[c]));
            }
        }
    }
    let n = a.dim();
    let combo = |offset: usize, v: &SVec<F>, x: &SVec<F>| -> SVec<F> {
        let mut acc = BTreeMap::new();
        for (k, c) in v {
            accumulate(&mut acc, c, &m.act(offset + k, x));
        }
        svec_from_map(acc)
    };
    for c in (0..m.dim()).filter(|&c| m.exact_for(c, 2)) {
        let x = vec![(c, F::one())];
        for i in 0..n {
            for j in 0..n {
                let ij = m.act(i, &m.act(j, &x));
                let prod = a.mul(i, j);
                let bad = match a.kind {
                    ClassicalOperad::Lie => {
                        let mut acc: BTreeMap<usize, F> = ij.into_iter().collect();
                        accumulate(&mut acc, &-F::one(), &m.act(j, &m.act(i, &x)));
                        svec_from_map(acc) != combo(0, &prod, &x)
                    }
                    ClassicalOperad::Com => ij != combo(0, &prod, &x),
                    ClassicalOperad::Asc => {
                        let rr = m.act(n + j, &m.act(n + i, &x));
                        let lr = m.act(i, &m.act(n + j, &x));
                        let rl = m.act(n + j, &m.act(i, &x));
                        ij != combo(0, &prod, &x) || rr != combo(n, &prod, &x) || lr != rl
                    }
                };
                if bad {
                    out.push(format!("module axiom fails for ({}, {}) on {}", a.names[i], a.names[j], m.names[c]));
                    return out;
                }
            }
        }
    }
    out
}

/// `U(A)_{≤bound} ⊗ M` with left multiplication; `M` is a graded space given by names and weights.
pub fn free_module<F: Scalar>(a: &PAlgebra<F>, names: &[String], weights: &[i64], bound: usize) -> Result<PModule<F>, Error> {
    let u = enveloping_algebra(a, bound)?;
    Ok(free_module_over(&u, names, weights))
}

pub fn free_module_over<F: Scalar>(u: &Enveloping<F>, names: &[String], weights: &[i64]) -> PModule<F> {
    let d = names.len();
    let ua = &u.algebra;
    let mut out_names = Vec::new();
    let mut out_weights = Vec::new();
    let mut filtration = Vec::new();
    for i in 0..ua.dim() {
        for k in 0..d {
            out_names.push(format!("{}⊗{}", ua.names[i], names[k]));
            out_weights.push(ua.weights[i] + weights[k]);
            filtration.push(ua.filtration[i]);
        }
    }
    let actions = (0..u.generator_count())
        .map(|g| {
            let mut entries = Vec::new();
            for i in 0..ua.dim() {
                for (r, c) in u.generator_times(g, i) {
                    for k in 0..d {
                        entries.push((r * d + k, i * d + k, c.clone()));
                    }
                }
            }
            SparseMatrix::from_triplets(ua.dim() * d, ua.dim() * d, entries)
        })
        .collect();
    PModule { kind: u.kind, names: out_names, weights: out_weights, filtration, bound: ua.bound, actions }
}

/// `f*N`: the target module seen over the source through `f`.
pub fn restrict_module<F: Scalar>(f: &AlgebraMorphism<F>, n: &PModule<F>) -> PModule<F> {
    let (s, t) = (f.source.dim(), f.target.dim());
    let halves = if f.source.kind == ClassicalOperad::Asc { 2 } else { 1 };
    let cols = f.map.columns();
    let mut actions = Vec::new();
    for h in 0..halves {
        for g in 0..s {
            let mut acc = SparseMatrix::zero(n.dim(), n.dim());
            for (k, c) in &cols[g] {
                acc = acc.add_scaled(c, &n.actions[h * t + k]);
            }
            actions.push(acc);
        }
    }
    PModule { actions, ..n.clone() }
}

/// Image of the source generator `g` in `U(target)` under `U(f)`.
fn generator_image<F: Scalar>(f: &AlgebraMorphism<F>, u: &Enveloping<F>, g: usize) -> SVec<F> {
    let s = f.source.dim();
    let t = f.target.dim();
    let (half, local) = (g / s.max(1), g % s.max(1));
    let mut acc = BTreeMap::new();
    for (k, c) in f.map.columns()[local].iter() {
        accumulate(&mut acc, c, &u.generators[half * t + k]);
    }
    svec_from_map(acc)
}

/// `f_!M = U(target) ⊗_{U(source)} M`, truncated at total filtration `bound` for Lie algebras.
pub fn induce_module<F: Scalar>(f: &AlgebraMorphism<F>, m: &PModule<F>, bound: usize) -> Result<PModule<F>, Error> {
    check_algebra(&f.target)?;
    let u = enveloping_algebra(&f.target, bound)?;
    let ua = &u.algebra;
    let finite = ua.bound.is_none() && m.bound.is_none();
    let cap = if finite { usize::MAX } else { bound };
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    for i in 0..ua.dim() {
        for k in 0..m.dim() {
            if ua.filtration[i] + m.filtration[k] <= cap {
                index.insert((i, k), pairs.len());
                pairs.push((i, k));
            }
        }
    }
    let images: Vec<SVec<F>> = (0..generator_count(&f.source)).map(|g| generator_image(f, &u, g)).collect();
    let mut relations = Vec::new();
    for &(i, k) in &pairs {
        let fil = ua.filtration[i] + m.filtration[k];
        if !finite && (fil + 1 > cap || !m.exact_for(k, 1)) {
            continue;
        }
        for (g, img) in images.iter().enumerate() {
            let mut acc = BTreeMap::new();
            let uf = ua.mul_vec(&[(i, F::one())], img).expect("product within bound");
            for (r, c) in uf {
                accumulate(&mut acc, &c, &[(index[&(r, k)], F::one())]);
            }
            for (r, c) in m.act(g, &[(k, F::one())]) {
                accumulate(&mut acc, &-c, &[(index[&(i, r)], F::one())]);
            }
            relations.push(svec_from_map(acc));
        }
    }
    let fil: Vec<usize> = pairs.iter().map(|&(i, k)| ua.filtration[i] + m.filtration[k]).collect();
    let quotient = filtered_quotient(&fil, relations);
    let names = quotient.basis.iter().map(|&p| format!("{}⊗{}", ua.names[pairs[p].0], m.names[pairs[p].1])).collect();
    let weights = quotient.basis.iter().map(|&p| ua.weights[pairs[p].0] + m.weights[pairs[p].1]).collect();
    let filtration = quotient.basis.iter().map(|&p| ua.filtration[pairs[p].0] + m.filtration[pairs[p].1]).collect();
    let actions = (0..u.generator_count())
        .map(|g| {
            let cols: Vec<SVec<F>> = quotient
                .basis
                .iter()
                .map(|&p| {
                    let (i, k) = pairs[p];
                    let lifted: SVec<F> = svec_from_map(
                        u.generator_times(g, i)
                            .into_iter()
                            .filter_map(|(r, c)| index.get(&(r, k)).map(|&q| (q, c)))
                            .collect(),
                    );
                    quotient.projection.apply(&lifted)
                })
                .collect();
            SparseMatrix::from_columns(quotient.dim(), &cols)
        })
        .collect();
    Ok(PModule {
        kind: f.target.kind,
        names,
        weights,
        filtration,
        bound: if finite { None } else { Some(bound) },
        actions,
    })
}

/// Quotient of `m` by the submodule spanned by `relations`, which must be closed under the action
/// wherever the action is exact.
pub fn quotient_module<F: Scalar>(m: &PModule<F>, relations: Vec<SVec<F>>) -> PModule<F> {
    let q = filtered_quotient(&m.filtration, relations);
    let actions = m
        .actions
        .iter()
        .map(|act| {
            let cols: Vec<SVec<F>> = q.basis.iter().map(|&c| q.projection.apply(&act.apply(&[(c, F::one())]))).collect();
            SparseMatrix::from_columns(q.dim(), &cols)
        })
        .collect();
    PModule {
        kind: m.kind,
        names: q.basis.iter().map(|&c| m.names[c].clone()).collect(),
        weights: q.basis.iter().map(|&c| m.weights[c]).collect(),
        filtration: q.basis.iter().map(|&c| m.filtration[c]).collect(),
        bound: m.bound,
        actions,
    }
}

/// Quotient whose basis representatives have the lowest possible filtration, so that truncated
/// top layers are expressed through exact lower ones.
fn filtered_quotient<F: Scalar>(filtration: &[usize], relations: Vec<SVec<F>>) -> Coinvariants<F> {
    let n = filtration.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(filtration[i]), i));
    let mut pos = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let relabel = |v: SVec<F>| -> SVec<F> {
        let mut w: SVec<F> = v.into_iter().map(|(i, c)| (pos[i], c)).collect();
        w.sort_by_key(|x| x.0);
        w
    };
    let q = Coinvariants::from_relations(n, relations.into_iter().map(relabel));
    let mut basis: Vec<(usize, usize)> = q.basis.iter().enumerate().map(|(k, &p)| (order[p], k)).collect();
    basis.sort();
    let rows: Vec<usize> = basis.iter().map(|x| x.1).collect();
    let projection = q.projection.select_rows(&rows);
    let entries: Vec<(usize, usize, F)> = projection.entries().map(|(r, c, x)| (r, order[c], x.clone())).collect();
    Coinvariants { basis: basis.iter().map(|x| x.0).collect(), projection: SparseMatrix::from_triplets(rows.len(), n, entries) }
}

/// Basis of the weight-preserving module maps `M → N`. Constraints are imposed on the basis vectors
/// of `M` where the action is exact, so `N` should be untruncated.
pub fn hom_space<F: Scalar>(m: &PModule<F>, n: &PModule<F>) -> Vec<SparseMatrix<F>> {
    hom_space_shifted(m, n, 0)
}

/// Module maps of every weight shift, as `(shift, map)` pairs.
pub fn graded_hom_space<F: Scalar>(m: &PModule<F>, n: &PModule<F>) -> Vec<(i64, SparseMatrix<F>)> {
    let shifts: std::collections::BTreeSet<i64> =
        n.weights.iter().flat_map(|a| m.weights.iter().map(move |b| a - b)).collect();
    shifts.into_iter().flat_map(|s| hom_space_shifted(m, n, s).into_iter().map(move |h| (s, h))).collect()
}

/// Module maps raising weight by `shift`.
pub fn hom_space_shifted<F: Scalar>(m: &PModule<F>, n: &PModule<F>, shift: i64) -> Vec<SparseMatrix<F>> {
    let mut unknowns = Vec::new();
    let mut index = HashMap::new();
    for r in 0..n.dim() {
        for c in 0..m.dim() {
            if n.weights[r] == m.weights[c] + shift {
                index.insert((r, c), unknowns.len());
                unknowns.push((r, c));
            }
        }
    }
    let mut rows = Vec::new();
    for g in 0..m.actions.len().min(n.actions.len()) {
        let am = m.actions[g].columns();
        let an = &n.actions[g];
        for j in (0..m.dim()).filter(|&j| m.exact_for(j, 1)) {
            // (φ ρ_M(g) − ρ_N(g) φ) e_j, one equation per row of N.
            let mut eqs: BTreeMap<usize, BTreeMap<usize, F>> = BTreeMap::new();
            for (k, c) in &am[j] {
                for r in 0..n.dim() {
                    if let Some(&u) = index.get(&(r, *k)) {
                        accumulate(eqs.entry(r).or_default(), c, &[(u, F::one())]);
                    }
                }
            }
            for (r, s, c) in an.entries() {
                if let Some(&u) = index.get(&(s, j)) {
                    accumulate(eqs.entry(r).or_default(), &-c.clone(), &[(u, F::one())]);
                }
            }
            rows.extend(eqs.into_values().map(svec_from_map).filter(|v| !v.is_empty()));
        }
    }
    let rref = Rref::of_rows(unknowns.len(), rows.into_iter());
    rref.kernel_basis()
        .into_iter()
        .map(|v| SparseMatrix::from_triplets(n.dim(), m.dim(), v.into_iter().map(|(u, c)| (unknowns[u].0, unknowns[u].1, c))))
        .collect()
}
