use std::collections::{HashMap, VecDeque};

use crate::exactalg::{Echelon, SVec, Scalar, SparseMatrix};
use crate::symcore::{Coinvariants, SigmaRep};
use crate::Error;

use super::tree::{act_transposition, add_term, enumerate_trees, normalize_vec, treevec_to_svec, Tree, TreeVec};
use super::{SigmaObject, TruncatedOperad};

/// Human-readable tree using generator names and 1-based leaves.
pub fn tree_name<F: Scalar>(t: &Tree, e: &SigmaObject<F>) -> String {
    match t {
        Tree::Leaf(l) => format!("{}", l + 1),
        Tree::Node { arity, decoration, children } => {
            let kids: Vec<String> = children.iter().map(|c| tree_name(c, e)).collect();
            format!("{}({})", e.names[*arity][*decoration], kids.join(","))
        }
    }
}

pub fn tree_weight<F: Scalar>(t: &Tree, e: &SigmaObject<F>) -> usize {
    t.vertices().iter().map(|&(a, d)| e.weights[a][d]).sum()
}

/// Basis of normalized trees in one arity.
#[derive(Clone, Debug)]
pub struct TreeBasis {
    pub trees: Vec<Tree>,
    pub index: HashMap<Tree, usize>,
}

impl TreeBasis {
    pub fn new<F: Scalar>(arity: usize, e: &SigmaObject<F>) -> Self {
        let labels: Vec<usize> = (0..arity).collect();
        let mut trees = if arity == 0 { Vec::new() } else { enumerate_trees(&labels, e) };
        trees.sort_by_cached_key(|t| (tree_weight(t, e), t.clone()));
        let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        TreeBasis { trees, index }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn to_svec<F: Scalar>(&self, v: &TreeVec<F>) -> SVec<F> {
        treevec_to_svec(v, &self.index)
    }

    pub fn to_treevec<F: Scalar>(&self, v: &[(usize, F)]) -> TreeVec<F> {
        v.iter().map(|(i, c)| (self.trees[*i].clone(), c.clone())).collect()
    }
}

/// Grafts two combinations of normalized trees.
pub fn graft_vec<F: Scalar>(a: &TreeVec<F>, i: usize, b: &TreeVec<F>, e: &SigmaObject<F>) -> TreeVec<F> {
    let mut out = TreeVec::new();
    for (ta, ca) in a {
        for (tb, cb) in b {
            let (t, odd) = ta.graft(i, tb, e);
            let c = ca.clone() * cb.clone();
            add_term(&mut out, t, if odd { -c } else { c });
        }
    }
    out
}

fn sigma_rep_on_trees<F: Scalar>(n: usize, basis: &TreeBasis, e: &SigmaObject<F>, degrees: Vec<i64>) -> SigmaRep<F> {
    let gens = (0..n.saturating_sub(1))
        .map(|q| {
            let cols: Vec<SVec<F>> = basis.trees.iter().map(|t| basis.to_svec(&act_transposition(t, q, e))).collect();
            SparseMatrix::from_columns(basis.len(), &cols)
        })
        .collect();
    SigmaRep { n, degrees, gens }
}

/// Free operad on a reduced Σ*-object of generators, truncated at a maximal arity.
#[derive(Clone, Debug)]
pub struct FreeOperad<F: Scalar> {
    pub generators: SigmaObject<F>,
    pub bases: Vec<TreeBasis>,
    pub operad: TruncatedOperad<F>,
}

pub fn free_operad<F: Scalar>(generators: &SigmaObject<F>, max_arity: usize) -> Result<FreeOperad<F>, Error> {
    let e = generators.truncated(max_arity);
    if e.dim(0) > 0 || e.dim(1) > 0 {
        return Err(Error::Invalid("generators must live in arities ≥ 2".into()));
    }
    let bases: Vec<TreeBasis> = (0..=max_arity).map(|n| TreeBasis::new(n, &e)).collect();
    let mut carrier = SigmaObject::zero(max_arity);
    for n in 1..=max_arity {
        let b = &bases[n];
        let degrees = b.trees.iter().map(|t| t.degree(&e)).collect();
        let rep = sigma_rep_on_trees(n, b, &e, degrees);
        let names = b.trees.iter().map(|t| tree_name(t, &e)).collect();
        let weights = b.trees.iter().map(|t| tree_weight(t, &e)).collect();
        carrier.set(rep, Some(names), Some(weights));
    }
    let mut compositions = HashMap::new();
    for r in 2..=max_arity {
        for s in 2..=max_arity + 1 - r {
            let n = r + s - 1;
            for i in 0..r {
                let mut entries = Vec::new();
                for (ia, ta) in bases[r].trees.iter().enumerate() {
                    for (ib, tb) in bases[s].trees.iter().enumerate() {
                        let (t, odd) = ta.graft(i, tb, &e);
                        let row = bases[n].index[&t];
                        entries.push((row, ia * bases[s].len() + ib, if odd { -F::one() } else { F::one() }));
                    }
                }
                compositions.insert((r, s, i), SparseMatrix::from_triplets(bases[n].len(), bases[r].len() * bases[s].len(), entries));
            }
        }
    }
    let operad = TruncatedOperad { name: "free".into(), carrier, compositions, differential: None };
    Ok(FreeOperad { generators: e, bases, operad })
}

/// Operad presented by generators and relations; relations are combinations of trees with
/// standard leaf labels (not necessarily normalized).
#[derive(Clone, Debug)]
pub struct OperadPresentation<F: Scalar> {
    pub name: String,
    pub generators: SigmaObject<F>,
    pub relations: Vec<(usize, TreeVec<F>)>,
}

impl<F: Scalar> OperadPresentation<F> {
    /// Whether all generators are binary and all relations are combinations of two-vertex trees.
    pub fn is_binary_quadratic(&self) -> bool {
        (0..=self.generators.max_arity()).all(|n| n == 2 || self.generators.dim(n) == 0)
            && self.relations.iter().all(|(n, v)| *n == 3 && v.keys().all(|t| t.weight() == 2))
    }
}

/// Quotient `F(E)/(R)` with the normal-form basis.
#[derive(Clone, Debug)]
pub struct QuotientOperad<F: Scalar> {
    pub generators: SigmaObject<F>,
    pub bases: Vec<TreeBasis>,
    /// Echelon basis of the ideal in tree coordinates, per arity.
    pub ideal: Vec<Echelon<F>>,
    /// Quotient map from tree coordinates, per arity.
    pub projections: Vec<Coinvariants<F>>,
    pub operad: TruncatedOperad<F>,
}

fn generator_tree(k: usize, d: usize) -> Tree {
    Tree::Node { arity: k, decoration: d, children: (0..k).map(Tree::Leaf).collect() }
}

pub fn quotient_presentation<F: Scalar>(pres: &OperadPresentation<F>, max_arity: usize) -> Result<QuotientOperad<F>, Error> {
    let e = pres.generators.truncated(max_arity);
    if e.dim(0) > 0 || e.dim(1) > 0 {
        return Err(Error::Invalid("generators must live in arities ≥ 2".into()));
    }
    for n in 2..=max_arity {
        e.component(n).validate()?;
    }
    let bases: Vec<TreeBasis> = (0..=max_arity).map(|n| TreeBasis::new(n, &e)).collect();
    let mut ideal: Vec<Echelon<F>> = bases.iter().map(|b| Echelon::new(b.len())).collect();
    for n in 1..=max_arity {
        let mut seeds: Vec<SVec<F>> = Vec::new();
        for (arity, rel) in &pres.relations {
            if *arity == n {
                if rel.keys().any(|t| t.leaf_count() != n) {
                    return Err(Error::Arity(format!("relation in arity {} has wrong leaf count", n)));
                }
                seeds.push(bases[n].to_svec(&normalize_vec(rel, &e)));
            }
        }
        for m in 2..n {
            let k = n + 1 - m;
            if e.dim(k) == 0 {
                continue;
            }
            let rows: Vec<TreeVec<F>> = ideal[m].rows().iter().map(|r| bases[m].to_treevec(r)).collect();
            for x in &rows {
                for d in 0..e.dim(k) {
                    let g: TreeVec<F> = [(generator_tree(k, d), F::one())].into();
                    for i in 0..k {
                        seeds.push(bases[n].to_svec(&graft_vec(&g, i, x, &e)));
                    }
                    for j in 0..m {
                        seeds.push(bases[n].to_svec(&graft_vec(x, j, &g, &e)));
                    }
                }
            }
        }
        let mut queue: VecDeque<SVec<F>> = VecDeque::new();
        for s in seeds {
            if ideal[n].insert(s.clone()).is_some() {
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let tv = bases[n].to_treevec(&v);
            for q in 0..n - 1 {
                let mut acted = TreeVec::new();
                for (t, c) in &tv {
                    for (u, x) in act_transposition(t, q, &e) {
                        add_term(&mut acted, u, c.clone() * x);
                    }
                }
                let w = bases[n].to_svec(&acted);
                if ideal[n].insert(w.clone()).is_some() {
                    queue.push_back(w);
                }
            }
        }
    }
    let projections: Vec<Coinvariants<F>> =
        (0..=max_arity).map(|n| Coinvariants::from_relations(bases[n].len(), ideal[n].rows().iter().cloned())).collect();
    let mut carrier = SigmaObject::zero(max_arity);
    for n in 1..=max_arity {
        let proj = &projections[n];
        let trees: Vec<&Tree> = proj.basis.iter().map(|&c| &bases[n].trees[c]).collect();
        let gens = (0..n - 1)
            .map(|q| {
                let cols: Vec<SVec<F>> =
                    trees.iter().map(|t| proj.projection.apply(&bases[n].to_svec(&act_transposition(t, q, &e)))).collect();
                SparseMatrix::from_columns(proj.dim(), &cols)
            })
            .collect();
        let degrees = trees.iter().map(|t| t.degree(&e)).collect();
        let names = trees.iter().map(|t| tree_name(t, &e)).collect();
        let weights = trees.iter().map(|t| tree_weight(t, &e)).collect();
        carrier.set(SigmaRep { n, degrees, gens }, Some(names), Some(weights));
    }
    let mut compositions = HashMap::new();
    for r in 2..=max_arity {
        for s in 2..=max_arity + 1 - r {
            let n = r + s - 1;
            let (pr, ps) = (&projections[r], &projections[s]);
            for i in 0..r {
                let mut cols = Vec::with_capacity(pr.dim() * ps.dim());
                for &ca in &pr.basis {
                    for &cb in &ps.basis {
                        let (t, odd) = bases[r].trees[ca].graft(i, &bases[s].trees[cb], &e);
                        let col = projections[n].projection.apply(&[(bases[n].index[&t], if odd { -F::one() } else { F::one() })]);
                        cols.push(col);
                    }
                }
                compositions.insert((r, s, i), SparseMatrix::from_columns(projections[n].dim(), &cols));
            }
        }
    }
    let operad = TruncatedOperad { name: pres.name.clone(), carrier, compositions, differential: None };
    Ok(QuotientOperad { generators: e, bases, ideal, projections, operad })
}
