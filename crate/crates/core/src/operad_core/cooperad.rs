use std::collections::{HashMap, VecDeque};

use crate::exactalg::{Echelon, Rref, SVec, Scalar, SparseMatrix};
use crate::symcore::{Permutation, SigmaRep};
use crate::Error;

use super::free::{free_operad, tree_name, OperadPresentation};
use super::tree::{act_transposition, add_term, normalize, set_partitions, Tree, TreeVec};
use super::{tensor_expand, SigmaObject, TruncatedOperad};

/// Reduced cooperad known up to a maximal arity: `C(0) = 0`, `C(1) = 𝕜·id`.
/// `decompositions[(r, s, i)]` is the matrix of the infinitesimal decomposition
/// `Δ_i : C(r+s−1) → C(r) ⊗ C(s)` for `r, s ≥ 2`, with row index `a·dim C(s) + b`.
#[derive(Clone, Debug)]
pub struct TruncatedCooperad<F: Scalar> {
    pub name: String,
    pub carrier: SigmaObject<F>,
    pub decompositions: HashMap<(usize, usize, usize), SparseMatrix<F>>,
    pub differential: Option<Vec<SparseMatrix<F>>>,
}

impl<F: Scalar> TruncatedCooperad<F> {
    pub fn max_arity(&self) -> usize {
        self.carrier.max_arity()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.carrier.dim(n)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.carrier.dims()
    }

    pub fn degree(&self, n: usize, b: usize) -> i64 {
        self.carrier.component(n).degrees[b]
    }

    /// `Δ_i(c)` for `c ∈ C(r+s−1)`, in `C(r) ⊗ C(s)` coordinates. The cases `r = 1` and `s = 1`
    /// give `id ⊗ c` and `c ⊗ id`.
    pub fn decompose(&self, r: usize, s: usize, i: usize, c: &[(usize, F)]) -> SVec<F> {
        if r == 1 || s == 1 {
            return c.to_vec();
        }
        self.decompositions[&(r, s, i)].apply(c)
    }

    /// Decomposition along an arbitrary set of inputs: returns slot labels that place `subset`
    /// as an interval starting at its minimum, and `Δ_min(c·τ)` where `c·τ` carries those labels.
    pub fn decompose_subset(&self, n: usize, c: &[(usize, F)], subset: &[usize]) -> (Vec<usize>, SVec<F>) {
        let labels = interval_labels(n, subset);
        let tau = Permutation::new(labels.clone()).expect("bijection");
        let ct = self.carrier.component(n).act(&tau).apply(c);
        let s = subset.len();
        (labels, self.decompose(n + 1 - s, s, subset[0], &ct))
    }

    /// Linear dual with the transposed action, as an operad.
    pub fn dual_operad(&self) -> TruncatedOperad<F> {
        let mut carrier = self.carrier.clone();
        for c in &mut carrier.components {
            c.gens = c.gens.iter().map(|g| g.transpose()).collect();
        }
        TruncatedOperad {
            name: format!("{}*", self.name),
            carrier,
            compositions: self.decompositions.iter().map(|(k, m)| (*k, m.transpose())).collect(),
            differential: self.differential.as_ref().map(|d| d.iter().map(|m| m.transpose()).collect()),
        }
    }

    /// Counit, coassociativity, equivariance, and the coderivation rule for the differential,
    /// checked on the dual operad.
    pub fn check_axioms(&self) -> Result<(), Error> {
        self.dual_operad().check_axioms()
    }
}

/// Cofree conilpotent cooperad on `e`: the tree module with `Δ_i` the transpose of grafting.
pub fn cofree_cooperad<F: Scalar>(e: &SigmaObject<F>, max_arity: usize) -> Result<TruncatedCooperad<F>, Error> {
    let free = free_operad(e, max_arity)?;
    Ok(TruncatedCooperad {
        name: "cofree".into(),
        carrier: free.operad.carrier.clone(),
        decompositions: free.operad.compositions.iter().map(|(k, m)| (*k, m.transpose())).collect(),
        differential: None,
    })
}

/// Koszul dual cooperad `C(sE, s²R)` of a homogeneous quadratic presentation, realised inside the
/// cofree cooperad on the suspension of the generators.
#[derive(Clone, Debug)]
pub struct KoszulDual<F: Scalar> {
    /// Suspended generators.
    pub suspended: SigmaObject<F>,
    /// Basis of each arity as combinations of normalized trees.
    pub elements: Vec<Vec<TreeVec<F>>>,
    /// Tree whose coefficient reads off each basis coordinate.
    pub pivots: Vec<Vec<Tree>>,
    pub cooperad: TruncatedCooperad<F>,
}

impl<F: Scalar> KoszulDual<F> {
    /// Coordinates of a combination of trees lying in `C(n)`.
    pub fn coordinates(&self, n: usize, v: &TreeVec<F>) -> SVec<F> {
        self.pivots[n]
            .iter()
            .enumerate()
            .filter_map(|(a, t)| v.get(t).filter(|c| !c.is_zero()).map(|c| (a, c.clone())))
            .collect()
    }
}

/// Local coordinates for trees, grown on demand.
#[derive(Default)]
struct TreeIndex {
    trees: Vec<Tree>,
    index: HashMap<Tree, usize>,
}

impl TreeIndex {
    fn id(&mut self, t: &Tree) -> usize {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        self.trees.push(t.clone());
        self.index.insert(t.clone(), self.trees.len() - 1);
        self.trees.len() - 1
    }

    fn svec<F: Scalar>(&mut self, v: &TreeVec<F>) -> SVec<F> {
        let mut out: SVec<F> = v.iter().map(|(t, c)| (self.id(t), c.clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// Span of `C(n)` for arities already computed, supporting reduction modulo it.
struct Layer<F: Scalar> {
    index: TreeIndex,
    echelon: Echelon<F>,
}

impl<F: Scalar> Layer<F> {
    fn residual(&self, v: &TreeVec<F>) -> TreeVec<F> {
        let mut inside = Vec::new();
        let mut out = TreeVec::new();
        for (t, c) in v {
            match self.index.index.get(t) {
                Some(&i) => inside.push((i, c.clone())),
                None => add_term(&mut out, t.clone(), c.clone()),
            }
        }
        inside.sort_by_key(|e| e.0);
        for (i, c) in self.echelon.reduce(inside) {
            add_term(&mut out, self.index.trees[i].clone(), c);
        }
        out
    }
}

fn relabel<F: Scalar>(v: &TreeVec<F>, labels: &[usize]) -> TreeVec<F> {
    v.iter().map(|(t, c)| (t.map_leaves(&|l| labels[l]), c.clone())).collect()
}

pub fn koszul_dual_cooperad<F: Scalar>(pres: &OperadPresentation<F>, max_arity: usize) -> Result<KoszulDual<F>, Error> {
    if pres.relations.iter().any(|(_, v)| v.keys().any(|t| t.weight() != 2)) {
        return Err(Error::Invalid("Koszul dual needs homogeneous quadratic relations".into()));
    }
    let e = pres.generators.truncated(max_arity);
    let se = e.shifted(1);
    let mut layers: Vec<Layer<F>> = Vec::new();
    let mut elements: Vec<Vec<TreeVec<F>>> = Vec::new();
    for n in 0..=max_arity {
        let mut index = TreeIndex::default();
        let mut echelon_rows: Vec<TreeVec<F>> = Vec::new();
        if n == 1 {
            echelon_rows.push([(Tree::Leaf(0), F::one())].into());
        }
        if n >= 2 {
            // Weight one: generators.
            for d in 0..se.dim(n) {
                let t = Tree::Node { arity: n, decoration: d, children: (0..n).map(Tree::Leaf).collect() };
                echelon_rows.push([(t, F::one())].into());
            }
            // Weight two: Σ-closure of the suspended relations.
            let mut rel_span: Vec<TreeVec<F>> = Vec::new();
            let mut rel_ech = Echelon::new(usize::MAX);
            let mut queue = VecDeque::new();
            for (arity, rel) in &pres.relations {
                if *arity != n {
                    continue;
                }
                let mut v = TreeVec::new();
                for (t, c) in rel {
                    let root_odd = match t {
                        Tree::Node { arity, decoration, .. } => e.component(*arity).degrees[*decoration].rem_euclid(2) == 1,
                        Tree::Leaf(_) => false,
                    };
                    for (u, x) in normalize(t, &se) {
                        let coef = c.clone() * x;
                        add_term(&mut v, u, if root_odd { -coef } else { coef });
                    }
                }
                queue.push_back(v);
            }
            while let Some(v) = queue.pop_front() {
                if rel_ech.insert(index.svec(&v)).is_none() {
                    continue;
                }
                for q in 0..n - 1 {
                    let mut acted = TreeVec::new();
                    for (t, c) in &v {
                        for (u, x) in act_transposition(t, q, &se) {
                            add_term(&mut acted, u, c.clone() * x);
                        }
                    }
                    queue.push_back(acted);
                }
                rel_span.push(v);
            }
            echelon_rows.extend(rel_span);
            // Weights ≥ 3: kernel of the projected decompositions on root-plus-children candidates.
            let mut by_weight: HashMap<usize, Vec<TreeVec<F>>> = HashMap::new();
            for k in 2..=n {
                for d in 0..se.dim(k) {
                    for blocks in set_partitions(&(0..n).collect::<Vec<_>>(), k) {
                        let options: Vec<Vec<(usize, TreeVec<F>)>> = blocks
                            .iter()
                            .map(|b| elements[b.len()].iter().map(|c| (weight_of(c), relabel(c, b))).collect())
                            .collect();
                        let mut partial: Vec<(usize, Vec<&TreeVec<F>>)> = vec![(1, Vec::new())];
                        for opts in &options {
                            let mut next = Vec::new();
                            for (w, pre) in &partial {
                                for (cw, c) in opts {
                                    let mut p = pre.clone();
                                    p.push(c);
                                    next.push((w + cw, p));
                                }
                            }
                            partial = next;
                        }
                        for (w, kids) in partial {
                            if w < 3 {
                                continue;
                            }
                            by_weight.entry(w).or_default().push(assemble(k, d, &kids, &se));
                        }
                    }
                }
            }
            let mut weights: Vec<usize> = by_weight.keys().copied().collect();
            weights.sort();
            for w in weights {
                let cands = &by_weight[&w];
                let mut coords: HashMap<(Vec<usize>, bool, Tree, Tree), usize> = HashMap::new();
                let mut cols: Vec<SVec<F>> = Vec::new();
                for v in cands {
                    let mut by_lower: HashMap<(Vec<usize>, Tree), TreeVec<F>> = HashMap::new();
                    let mut by_upper: HashMap<(Vec<usize>, Tree), TreeVec<F>> = HashMap::new();
                    for (t, c) in v {
                        for (set, up, low, odd) in t.subtree_cuts(&se) {
                            let coef = if odd { -c.clone() } else { c.clone() };
                            add_term(by_lower.entry((set.clone(), low.clone())).or_default(), up.clone(), coef.clone());
                            add_term(by_upper.entry((set, up)).or_default(), low, coef);
                        }
                    }
                    let mut col: std::collections::BTreeMap<usize, F> = Default::default();
                    for ((set, low), ups) in by_lower {
                        let r = n + 1 - set.len();
                        for (up, c) in layers[r].residual(&ups) {
                            let len = coords.len();
                            let key = *coords.entry((set.clone(), false, up, low.clone())).or_insert(len);
                            *col.entry(key).or_insert_with(F::zero) += c;
                        }
                    }
                    for ((set, up), lows) in by_upper {
                        for (low, c) in layers[set.len()].residual(&lows) {
                            let len = coords.len();
                            let key = *coords.entry((set.clone(), true, up.clone(), low)).or_insert(len);
                            *col.entry(key).or_insert_with(F::zero) += c;
                        }
                    }
                    cols.push(col.into_iter().filter(|(_, x)| !x.is_zero()).collect());
                }
                let m = SparseMatrix::from_columns(coords.len(), &cols);
                for combo in m.kernel() {
                    let mut v = TreeVec::new();
                    for (j, a) in combo {
                        for (t, c) in &cands[j] {
                            add_term(&mut v, t.clone(), a.clone() * c.clone());
                        }
                    }
                    if !v.is_empty() {
                        echelon_rows.push(v);
                    }
                }
            }
        }
        let mut echelon = Echelon::new(usize::MAX);
        for v in &echelon_rows {
            let sv = index.svec(v);
            echelon.insert(sv);
        }
        let rref = Rref::from_echelon(echelon.clone());
        let basis: Vec<TreeVec<F>> = rref
            .rows
            .iter()
            .map(|r| r.iter().map(|(i, c)| (index.trees[*i].clone(), c.clone())).collect())
            .collect();
        elements.push(basis);
        layers.push(Layer { index, echelon });
    }
    let pivots: Vec<Vec<Tree>> = elements
        .iter()
        .zip(&layers)
        .map(|(els, layer)| {
            els.iter()
                .map(|v| {
                    let mut ids: Vec<usize> = v.keys().map(|t| layer.index.index[t]).collect();
                    ids.sort();
                    layer.index.trees[ids[0]].clone()
                })
                .collect()
        })
        .collect();
    let mut kd = KoszulDual {
        suspended: se.clone(),
        elements,
        pivots,
        cooperad: TruncatedCooperad {
            name: format!("{}¡", pres.name),
            carrier: SigmaObject::zero(max_arity),
            decompositions: HashMap::new(),
            differential: None,
        },
    };
    let mut carrier = SigmaObject::zero(max_arity);
    for n in 1..=max_arity {
        let els = &kd.elements[n];
        let gens = (0..n - 1)
            .map(|q| {
                let cols: Vec<SVec<F>> = els
                    .iter()
                    .map(|v| {
                        let mut acted = TreeVec::new();
                        for (t, c) in v {
                            for (u, x) in act_transposition(t, q, &se) {
                                add_term(&mut acted, u, c.clone() * x);
                            }
                        }
                        kd.coordinates(n, &acted)
                    })
                    .collect();
                SparseMatrix::from_columns(els.len(), &cols)
            })
            .collect();
        let degrees = els.iter().map(|v| v.keys().next().expect("nonzero").degree(&se)).collect();
        let names = kd.pivots[n].iter().map(|t| tree_name(t, &se)).collect();
        let weights = els.iter().map(weight_of).collect();
        carrier.set(SigmaRep { n, degrees, gens }, Some(names), Some(weights));
    }
    let mut decompositions = HashMap::new();
    for r in 2..=max_arity {
        for s in 2..=max_arity + 1 - r {
            let n = r + s - 1;
            let ds = kd.elements[s].len();
            let pos_r: HashMap<&Tree, usize> = kd.pivots[r].iter().enumerate().map(|(a, t)| (t, a)).collect();
            let pos_s: HashMap<&Tree, usize> = kd.pivots[s].iter().enumerate().map(|(a, t)| (t, a)).collect();
            for i in 0..r {
                let mut entries = Vec::new();
                for (col, v) in kd.elements[n].iter().enumerate() {
                    for (t, c) in v {
                        if let Some((up, low, odd)) = t.cut_interval(i, s, &se) {
                            if let (Some(a), Some(b)) = (pos_r.get(&up), pos_s.get(&low)) {
                                entries.push((a * ds + b, col, if odd { -c.clone() } else { c.clone() }));
                            }
                        }
                    }
                }
                decompositions.insert((r, s, i), SparseMatrix::from_triplets(kd.elements[r].len() * ds, kd.elements[n].len(), entries));
            }
        }
    }
    kd.cooperad.carrier = carrier;
    kd.cooperad.decompositions = decompositions;
    Ok(kd)
}

fn weight_of<F: Scalar>(v: &TreeVec<F>) -> usize {
    v.keys().next().map_or(0, |t| t.weight())
}

/// Root vertex decorated by `d ∈ sE(k)` with the given children (already carrying final labels),
/// expanded and normalized.
fn assemble<F: Scalar>(k: usize, d: usize, kids: &[&TreeVec<F>], se: &SigmaObject<F>) -> TreeVec<F> {
    let mut out = TreeVec::new();
    let factors: Vec<Vec<(&Tree, &F)>> = kids.iter().map(|v| v.iter().collect()).collect();
    let sizes: Vec<SVec<F>> = factors.iter().map(|f| (0..f.len()).map(|j| (j, f[j].1.clone())).collect()).collect();
    for (idx, c) in tensor_expand(&sizes) {
        let children: Vec<Tree> = idx.iter().enumerate().map(|(j, &x)| factors[j][x].0.clone()).collect();
        let t = Tree::Node { arity: k, decoration: d, children };
        for (u, x) in normalize(&t, se) {
            add_term(&mut out, u, c.clone() * x);
        }
    }
    out
}

/// `0..min(subset)`, then `subset`, then the remaining inputs.
pub fn interval_labels(n: usize, subset: &[usize]) -> Vec<usize> {
    let m = subset[0];
    let mut out: Vec<usize> = (0..m).collect();
    out.extend_from_slice(subset);
    out.extend((m + 1..n).filter(|x| !subset.contains(x)));
    out
}

/// Nonempty subsets of `0..n`, each sorted.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1 << n)).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}
