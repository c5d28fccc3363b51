//! Operadic chain and cochain complexes of algebras over binary quadratic operads, with the
//! Chevalley–Eilenberg and Hochschild complexes as independent cross-checks.

mod classical;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::exactalg::{accumulate, svec_from_map, ChainComplex, Direction, SVec, Scalar, SparseMatrix};
use crate::operad_core::{classical_koszul_dual, sort_labels, subsets, ClassicalOperad, KoszulDual, Tree, TruncatedCooperad};
use crate::palgebra::{check_algebra, validate_module, PAlgebra, PModule};
use crate::symcore::{Coinvariants, SigmaRep};
use crate::Error;

pub(crate) use classical::certificate;
pub use classical::{
    chevalley_eilenberg_chains, chevalley_eilenberg_cochains, classical_cross_check, hochschild_chains, hochschild_cochains,
    CrossCheck, DegreeComparison,
};

/// Classical degree of the operadic degree `n`.
pub const DEGREE_SHIFT: i64 = 1;

/// `C(k) ⊗_{Σ_k} A^{⊗k}` with a basis indexed by sorted tuples of basis vectors of `A` and
/// classes of `C(k)` modulo the stabilizer of the tuple.
#[derive(Clone, Debug)]
pub struct CoinvariantSpace<F: Scalar> {
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
    /// Basis: `(tuple index, index in C(k) of the representative)`.
    pub basis: Vec<(usize, usize)>,
    pub weights: Vec<i64>,
    rep: SigmaRep<F>,
    quotients: Vec<Arc<Coinvariants<F>>>,
    offsets: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

fn sorted_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let start = t.last().copied().unwrap_or(0);
            for i in start..dim {
                let mut u: Vec<usize> = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

impl<F: Scalar> CoinvariantSpace<F> {
    pub fn new(c: &TruncatedCooperad<F>, arity: usize, weights: &[i64]) -> Self {
        let rep = c.carrier.component(arity).clone();
        let mut by_pattern: HashMap<Vec<usize>, Arc<Coinvariants<F>>> = HashMap::new();
        let mut space = CoinvariantSpace {
            arity,
            tuples: Vec::new(),
            basis: Vec::new(),
            weights: Vec::new(),
            rep: rep.clone(),
            quotients: Vec::new(),
            offsets: Vec::new(),
            index: HashMap::new(),
        };
        for t in sorted_tuples(weights.len(), arity) {
            let pattern: Vec<usize> = (0..arity.saturating_sub(1)).filter(|&q| t[q] == t[q + 1]).collect();
            let quotient = by_pattern
                .entry(pattern.clone())
                .or_insert_with(|| {
                    let id = SparseMatrix::<F>::identity(rep.dim());
                    let relations: Vec<SVec<F>> = pattern.iter().flat_map(|&q| id.sub(&rep.gens[q]).columns()).collect();
                    Arc::new(Coinvariants::from_relations(rep.dim(), relations.into_iter()))
                })
                .clone();
            if quotient.dim() == 0 {
                continue;
            }
            let w: i64 = t.iter().map(|&i| weights[i]).sum();
            let ti = space.tuples.len();
            space.index.insert(t.clone(), ti);
            space.offsets.push(space.basis.len());
            for &c in &quotient.basis {
                space.basis.push((ti, c));
                space.weights.push(w);
            }
            space.tuples.push(t);
            space.quotients.push(quotient);
        }
        space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Class of `v ⊗ (a_{labels[0]}, …)` where `v ∈ C(k)`.
    pub fn project(&self, v: SVec<F>, labels: &[usize]) -> SVec<F> {
        let mut labels = labels.to_vec();
        let v = sort_labels(&self.rep, v, &mut labels);
        match self.index.get(&labels) {
            None => Vec::new(),
            Some(&ti) => {
                let off = self.offsets[ti];
                self.quotients[ti].projection.apply(&v).into_iter().map(|(i, c)| (off + i, c)).collect()
            }
        }
    }
}

/// Binary operation `κ(ζ_b)` for each basis element `ζ_b` of `C(2)`, as generator combinations.
fn kappa<F: Scalar>(kd: &KoszulDual<F>) -> Vec<Vec<(usize, F)>> {
    kd.elements[2]
        .iter()
        .map(|v| {
            v.iter()
                .map(|(t, c)| match t {
                    Tree::Node { decoration, .. } => (*decoration, c.clone()),
                    Tree::Leaf(_) => unreachable!("arity-2 element"),
                })
                .collect()
        })
        .collect()
}

fn dual_for<F: Scalar>(a: &PAlgebra<F>, n_max: usize) -> Result<Arc<KoszulDual<F>>, Error> {
    crate::exactalg::check_field::<F>(n_max + 1)?;
    check_algebra(a)?;
    classical_koszul_dual::<F>(a.kind, (n_max + 1).max(2))
}

/// `C_n = C(n+1) ⊗_{Σ_{n+1}} A^{⊗(n+1)}` for `n ≤ n_max`. Homology is certified in degrees below
/// `n_max`; the top degree lacks its incoming differential.
#[derive(Clone, Debug)]
pub struct OperadicChainComplex<F: Scalar> {
    pub kind: ClassicalOperad,
    pub n_max: usize,
    pub spaces: Vec<CoinvariantSpace<F>>,
    pub complex: ChainComplex<F>,
}

fn space_list<F: Scalar>(kd: &KoszulDual<F>, a: &PAlgebra<F>, n_max: usize) -> Vec<CoinvariantSpace<F>> {
    (0..=n_max).map(|n| CoinvariantSpace::new(&kd.cooperad, n + 1, &a.weights)).collect()
}

/// Differential `C_n → C_{n−1}` applying `κ` of the arity-2 bottom piece to two arguments.
fn chain_differential<F: Scalar>(
    kd: &KoszulDual<F>,
    a: &PAlgebra<F>,
    kap: &[Vec<(usize, F)>],
    src: &CoinvariantSpace<F>,
    tgt: &CoinvariantSpace<F>,
) -> SparseMatrix<F> {
    let k = src.arity;
    let c = &kd.cooperad;
    let d2 = c.dim(2);
    let pairs: Vec<Vec<usize>> = subsets(k).into_iter().filter(|s| s.len() == 2).collect();
    let mut cols = Vec::with_capacity(src.dim());
    for &(ti, ci) in &src.basis {
        let t = &src.tuples[ti];
        let mut acc = BTreeMap::new();
        for s in &pairs {
            let (labels, vec) = c.decompose_subset(k, &[(ci, F::one())], s);
            let lo = s[0];
            for (row, coef) in vec {
                let (up, low) = (row / d2, row % d2);
                let mut value = BTreeMap::new();
                for (g, kc) in &kap[low] {
                    let prod = a.generator(*g, &[(t[labels[lo]], F::one())], &[(t[labels[lo + 1]], F::one())]);
                    accumulate(&mut value, kc, &prod);
                }
                for (z, x) in value {
                    let args: Vec<usize> = (0..k - 1)
                        .map(|q| match q.cmp(&lo) {
                            std::cmp::Ordering::Less => t[labels[q]],
                            std::cmp::Ordering::Equal => z,
                            std::cmp::Ordering::Greater => t[labels[q + 1]],
                        })
                        .collect();
                    let proj = tgt.project(vec![(up, F::one())], &args);
                    accumulate(&mut acc, &(coef.clone() * x), &proj);
                }
            }
        }
        cols.push(svec_from_map(acc));
    }
    SparseMatrix::from_columns(tgt.dim(), &cols)
}

pub fn chain_complex<F: Scalar>(a: &PAlgebra<F>, n_max: usize) -> Result<OperadicChainComplex<F>, Error> {
    let kd = dual_for(a, n_max)?;
    let kap = kappa(&kd);
    let spaces = space_list(&kd, a, n_max);
    let dims = spaces.iter().enumerate().map(|(n, s)| (n as i64, s.dim())).collect();
    let mut diffs = BTreeMap::new();
    for n in 1..=n_max {
        diffs.insert(n as i64, chain_differential(&kd, a, &kap, &spaces[n], &spaces[n - 1]));
    }
    let complex = ChainComplex::new(Direction::Chain, dims, diffs)?;
    Ok(OperadicChainComplex { kind: a.kind, n_max, spaces, complex })
}

impl<F: Scalar> OperadicChainComplex<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    /// Homology dimensions in the certified degrees `0..n_max`.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        (0..self.n_max as i64).map(|n| (n, self.complex.homology_at(n).0)).collect()
    }

    /// Certified homology per internal weight.
    pub fn weight_homology(&self) -> BTreeMap<i64, BTreeMap<i64, usize>> {
        let weights: Vec<Vec<i64>> = self.spaces.iter().map(|s| s.weights.clone()).collect();
        weight_components(&self.complex, &weights)
            .into_iter()
            .map(|(w, c)| (w, (0..self.n_max as i64).map(|n| (n, c.homology_at(n).0)).collect()))
            .collect()
    }
}

/// Splits a complex on degrees `0..` into its weight components; `weights[n][i]` is the weight of
/// basis vector `i` in degree `n`.
pub fn weight_components<F: Scalar>(c: &ChainComplex<F>, weights: &[Vec<i64>]) -> BTreeMap<i64, ChainComplex<F>> {
    let mut all: Vec<i64> = weights.iter().flatten().copied().collect();
    all.sort();
    all.dedup();
    let step = c.direction().step();
    let mut out = BTreeMap::new();
    for w in all {
        let pick = |n: i64| -> Vec<usize> {
            if n < 0 || n as usize >= weights.len() {
                return Vec::new();
            }
            (0..weights[n as usize].len()).filter(|&i| weights[n as usize][i] == w).collect()
        };
        let mut dims = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in 0..weights.len() as i64 {
            let cols = pick(n);
            dims.insert(n, cols.len());
            let rows = pick(n + step);
            if !rows.is_empty() && !cols.is_empty() {
                diffs.insert(n, c.differential(n).select_rows(&rows).select_cols(&cols));
            }
        }
        out.insert(w, ChainComplex::new_unchecked(c.direction(), dims, diffs).expect("shapes from selection"));
    }
    out
}

/// `Hom(C(n+1) ⊗_Σ A^{⊗(n+1)}, M)` for `n ≤ n_max`; certified in degrees below `n_max`.
#[derive(Clone, Debug)]
pub struct OperadicCochainComplex<F: Scalar> {
    pub kind: ClassicalOperad,
    pub n_max: usize,
    pub spaces: Vec<CoinvariantSpace<F>>,
    pub module_dim: usize,
    /// Weight of each cochain basis vector `(i, m)` at index `i·module_dim + m`.
    pub weights: Vec<Vec<i64>>,
    pub complex: ChainComplex<F>,
}

/// Operator on `M` given by the binary generator `g` with the module element in `slot` and the
/// algebra basis vector `x` in the other slot.
fn module_operator<F: Scalar>(kind: ClassicalOperad, m: &PModule<F>, n: usize, g: usize, slot: usize, x: usize) -> SparseMatrix<F> {
    match kind {
        ClassicalOperad::Lie => {
            if slot == 1 {
                m.actions[x].clone()
            } else {
                m.actions[x].scale(&-F::one())
            }
        }
        ClassicalOperad::Com => m.actions[x].clone(),
        ClassicalOperad::Asc => {
            // m(x, v) = l_x v, m(v, x) = r_x v; the second generator swaps its inputs.
            let left = (slot == 1) == (g == 0);
            if left {
                m.actions[x].clone()
            } else {
                m.actions[n + x].clone()
            }
        }
    }
}

pub fn cochain_complex<F: Scalar>(a: &PAlgebra<F>, m: &PModule<F>, n_max: usize) -> Result<OperadicCochainComplex<F>, Error> {
    let problems = validate_module(a, m);
    if let Some(p) = problems.first() {
        return Err(Error::Invalid(format!("module does not match the algebra: {}", p)));
    }
    if m.bound.is_some() {
        return Err(Error::Invalid("coefficients must be an untruncated module".into()));
    }
    let kd = dual_for(a, n_max + 1)?;
    let kap = kappa(&kd);
    let c = &kd.cooperad;
    let spaces = space_list(&kd, a, n_max + 1);
    let md = m.dim();
    let weights: Vec<Vec<i64>> = spaces[..=n_max]
        .iter()
        .map(|s| s.weights.iter().flat_map(|w| m.weights.iter().map(move |mw| mw - w)).collect())
        .collect();
    let dims = weights.iter().enumerate().map(|(n, w)| (n as i64, w.len())).collect();
    let mut diffs = BTreeMap::new();
    for n in 0..n_max {
        let (src, tgt) = (&spaces[n], &spaces[n + 1]);
        let chain = chain_differential(&kd, a, &kap, tgt, src);
        let k = tgt.arity;
        let dl = c.dim(k - 1);
        let mut entries: Vec<(usize, usize, F)> = Vec::new();
        // g ∘ d
        for (i, y, x) in chain.entries() {
            for mm in 0..md {
                entries.push((y * md + mm, i * md + mm, -x.clone()));
            }
        }
        // λ_M ∘ (κ ⊗ g) on the decompositions with the arity-2 piece at the root.
        for (y, &(ti, ci)) in tgt.basis.iter().enumerate() {
            let t = &tgt.tuples[ti];
            for j in 0..k {
                let s: Vec<usize> = (0..k).filter(|&q| q != j).collect();
                let (labels, vec) = c.decompose_subset(k, &[(ci, F::one())], &s);
                let lo = s[0];
                let slot = if lo == 0 { 0 } else { 1 };
                let args: Vec<usize> = labels[lo..lo + k - 1].iter().map(|&q| t[q]).collect();
                for (row, coef) in vec {
                    let (up, low) = (row / dl, row % dl);
                    let lower = src.project(vec![(low, F::one())], &args);
                    for (g, kc) in &kap[up] {
                        let op = module_operator(a.kind, m, a.dim(), *g, slot, t[j]);
                        let sign = F::sign(n % 2 == 1);
                        for (i, val) in &lower {
                            let scale = sign.clone() * coef.clone() * kc.clone() * val.clone();
                            for (r, cc, x) in op.entries() {
                                entries.push((y * md + r, i * md + cc, scale.clone() * x.clone()));
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(n as i64, SparseMatrix::from_triplets(tgt.dim() * md, src.dim() * md, entries));
    }
    let complex = ChainComplex::new(Direction::Cochain, dims, diffs)?;
    Ok(OperadicCochainComplex { kind: a.kind, n_max, spaces: spaces[..=n_max].to_vec(), module_dim: md, weights, complex })
}

impl<F: Scalar> OperadicCochainComplex<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(|w| w.len()).collect()
    }

    /// Cohomology dimensions in the certified degrees `0..n_max`.
    pub fn cohomology(&self) -> BTreeMap<i64, usize> {
        (0..self.n_max as i64).map(|n| (n, self.complex.homology_at(n).0)).collect()
    }

    pub fn weight_cohomology(&self) -> BTreeMap<i64, BTreeMap<i64, usize>> {
        weight_components(&self.complex, &self.weights)
            .into_iter()
            .map(|(w, c)| (w, (0..self.n_max as i64).map(|n| (n, c.homology_at(n).0)).collect()))
            .collect()
    }
}

#[cfg(test)]
mod tests;
