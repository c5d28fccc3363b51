use std::collections::BTreeMap;

use crate::exactalg::{ChainComplex, Direction, SVec, Scalar, SparseMatrix};
use crate::operad_core::tree::{add_term, normalize, TreeVec};
use crate::operad_core::{
    free_operad, sort_labels, subsets, FreeOperad, KoszulDual, QuotientOperad, SigmaObject, Tree, TruncatedCooperad,
    TruncatedOperad,
};
use crate::symcore::koszul_sign;
use crate::Error;

fn sign<F: Scalar>(odd: bool) -> F {
    if odd {
        -F::one()
    } else {
        F::one()
    }
}

fn vertex(t: &Tree) -> (usize, usize, &[Tree]) {
    match t {
        Tree::Node { arity, decoration, children } => (*arity, *decoration, children),
        Tree::Leaf(_) => panic!("not a vertex"),
    }
}

fn shifted_carrier<F: Scalar>(carrier: &SigmaObject<F>, shift: i64, prefix: &str) -> SigmaObject<F> {
    let max = carrier.max_arity();
    let mut out = SigmaObject::zero(max);
    for n in 2..=max {
        let mut rep = carrier.component(n).clone();
        rep.degrees.iter_mut().for_each(|d| *d += shift);
        let names = carrier.names[n].iter().map(|x| format!("{}{}", prefix, x)).collect();
        out.set(rep, Some(names), None);
    }
    out
}

/// Differential matrices of a tree module, given the image of each tree.
fn tree_differential<F: Scalar>(free: &FreeOperad<F>, image: impl Fn(&Tree) -> TreeVec<F>) -> Vec<SparseMatrix<F>> {
    free.bases
        .iter()
        .map(|b| {
            let cols: Vec<SVec<F>> = b.trees.iter().map(|t| b.to_svec(&image(t))).collect();
            SparseMatrix::from_columns(b.len(), &cols)
        })
        .collect()
}

fn complex_of<F: Scalar>(degrees: &[i64], d: &SparseMatrix<F>) -> Result<(ChainComplex<F>, Vec<(i64, usize)>), Error> {
    ChainComplex::from_graded_operator(Direction::Chain, degrees, &d.columns())
}

/// `Bar(P)`: cofree cooperad on `sP̄` with the edge-contraction differential.
pub struct BarConstruction<F: Scalar> {
    pub suspended: SigmaObject<F>,
    pub trees: FreeOperad<F>,
    pub cooperad: TruncatedCooperad<F>,
}

impl<F: Scalar> BarConstruction<F> {
    pub fn complex(&self, n: usize) -> Result<(ChainComplex<F>, Vec<(i64, usize)>), Error> {
        let d = &self.cooperad.differential.as_ref().expect("bar has a differential")[n];
        complex_of(&self.cooperad.carrier.component(n).degrees, d)
    }
}

pub fn bar<F: Scalar>(p: &TruncatedOperad<F>) -> Result<BarConstruction<F>, Error> {
    if p.dim(0) != 0 || p.dim(1) != 1 {
        return Err(Error::Invalid(format!("{} is not augmented: need P(0) = 0 and P(1) = 𝕜", p.name)));
    }
    let sp = shifted_carrier(&p.carrier, 1, "s");
    let free = free_operad(&sp, p.max_arity())?;
    let image = |t: &Tree| -> TreeVec<F> {
        let mut out = TreeVec::new();
        let paths = t.node_paths();
        let degs: Vec<i64> = paths.iter().map(|pa| { let (k, d, _) = vertex(t.at_path(pa)); sp.component(k).degrees[d] }).collect();
        if let Some(dp) = &p.differential {
            for (x, pa) in paths.iter().enumerate() {
                let (k, d, kids) = vertex(t.at_path(pa));
                let before: i64 = degs[..x].iter().sum();
                for (e, c) in dp[k].apply(&[(d, F::one())]) {
                    let node = Tree::Node { arity: k, decoration: e, children: kids.to_vec() };
                    for (u, y) in normalize(&t.replace_at(pa, node), &sp) {
                        add_term(&mut out, u, -(c.clone() * y) * sign::<F>(before.rem_euclid(2) == 1));
                    }
                }
            }
        }
        for (xv, vpath) in paths.iter().enumerate().skip(1) {
            let upath = &vpath[..vpath.len() - 1];
            let j = vpath[vpath.len() - 1];
            let xu = paths.iter().position(|q| q.as_slice() == upath).expect("parent present");
            let between: i64 = degs[xu + 1..xv].iter().sum();
            let before: i64 = degs[..xu].iter().sum();
            let odd = (degs[xv] * between + before + degs[xu] - 1).rem_euclid(2) == 1;
            let (ku, du, ukids) = vertex(t.at_path(upath));
            let (kv, dv, vkids) = vertex(t.at_path(vpath));
            let merged = p.compose(ku, j, &[(du, F::one())], kv, &[(dv, F::one())]);
            let mut kids: Vec<Tree> = ukids[..j].to_vec();
            kids.extend_from_slice(vkids);
            kids.extend_from_slice(&ukids[j + 1..]);
            for (e, c) in merged {
                let node = Tree::Node { arity: ku + kv - 1, decoration: e, children: kids.clone() };
                for (u, y) in normalize(&t.replace_at(upath, node), &sp) {
                    add_term(&mut out, u, c.clone() * y * sign::<F>(odd));
                }
            }
        }
        out
    };
    let differential = tree_differential(&free, image);
    let cooperad = TruncatedCooperad {
        name: format!("Bar({})", p.name),
        carrier: free.operad.carrier.clone(),
        decompositions: free.operad.compositions.iter().map(|(k, m)| (*k, m.transpose())).collect(),
        differential: Some(differential),
    };
    Ok(BarConstruction { suspended: sp, trees: free, cooperad })
}

/// `Cobar(C)`: free operad on `s⁻¹C̄` with the vertex-splitting differential.
pub struct CobarConstruction<F: Scalar> {
    pub desuspended: SigmaObject<F>,
    pub trees: FreeOperad<F>,
    pub operad: TruncatedOperad<F>,
}

impl<F: Scalar> CobarConstruction<F> {
    pub fn complex(&self, n: usize) -> Result<(ChainComplex<F>, Vec<(i64, usize)>), Error> {
        let d = &self.operad.differential.as_ref().expect("cobar has a differential")[n];
        complex_of(&self.operad.carrier.component(n).degrees, d)
    }
}

pub fn cobar<F: Scalar>(c: &TruncatedCooperad<F>) -> Result<CobarConstruction<F>, Error> {
    if c.dim(0) != 0 || c.dim(1) != 1 {
        return Err(Error::Invalid(format!("{} is not coaugmented: need C(0) = 0 and C(1) = 𝕜", c.name)));
    }
    let sc = shifted_carrier(&c.carrier, -1, "s⁻¹");
    let free = free_operad(&sc, c.max_arity())?;
    let image = |t: &Tree| -> TreeVec<F> {
        let mut out = TreeVec::new();
        let paths = t.node_paths();
        let degs: Vec<i64> = paths.iter().map(|pa| { let (k, d, _) = vertex(t.at_path(pa)); sc.component(k).degrees[d] }).collect();
        for (x, pa) in paths.iter().enumerate() {
            let (k, d, kids) = vertex(t.at_path(pa));
            let before: i64 = degs[..x].iter().sum();
            let outer = sign::<F>(before.rem_euclid(2) == 1);
            if let Some(dc) = &c.differential {
                for (e, y) in dc[k].apply(&[(d, F::one())]) {
                    let node = Tree::Node { arity: k, decoration: e, children: kids.to_vec() };
                    for (u, z) in normalize(&t.replace_at(pa, node), &sc) {
                        add_term(&mut out, u, -(y.clone() * z) * outer.clone());
                    }
                }
            }
            let kid_degs: Vec<i64> = kids.iter().map(|s| s.degree(&sc)).collect();
            for subset in subsets(k) {
                let s = subset.len();
                if s < 2 || s == k {
                    continue;
                }
                let r = k + 1 - s;
                let i = subset[0];
                let (labels, dec) = c.decompose_subset(k, &[(d, F::one())], &subset);
                let ds = c.dim(s);
                for (ix, y) in dec {
                    let (a, b) = (ix / ds, ix % ds);
                    let mut degrees = vec![c.degree(r, a) - 1, c.degree(s, b) - 1];
                    degrees.extend(kid_degs.iter().copied());
                    let mut order = vec![0];
                    let mut ykids = Vec::with_capacity(r);
                    for q in 0..r {
                        if q == i {
                            order.push(1);
                            order.extend(subset.iter().map(|&j| j + 2));
                            let zkids = subset.iter().map(|&j| kids[j].clone()).collect();
                            ykids.push(Tree::Node { arity: s, decoration: b, children: zkids });
                        } else {
                            let slot = if q < i { labels[q] } else { labels[q + s - 1] };
                            order.push(slot + 2);
                            ykids.push(kids[slot].clone());
                        }
                    }
                    let odd = koszul_sign(&degrees, &order) ^ (c.degree(r, a).rem_euclid(2) == 1);
                    let node = Tree::Node { arity: r, decoration: a, children: ykids };
                    let coef = -(y * outer.clone()) * sign::<F>(odd);
                    for (u, z) in normalize(&t.replace_at(pa, node), &sc) {
                        add_term(&mut out, u, coef.clone() * z);
                    }
                }
            }
        }
        out
    };
    let differential = tree_differential(&free, image);
    let mut operad = free.operad.clone();
    operad.name = format!("Cobar({})", c.name);
    operad.differential = Some(differential);
    Ok(CobarConstruction { desuspended: sc, trees: free, operad })
}

/// Per-degree comparison of a chain map on homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyComparison {
    pub chain_map: bool,
    /// degree → (dim H source, dim H target, rank of the induced map)
    pub degrees: BTreeMap<i64, (usize, usize, usize)>,
}

impl HomologyComparison {
    pub fn is_quasi_isomorphism(&self) -> bool {
        self.chain_map && self.degrees.values().all(|&(a, b, r)| a == b && b == r)
    }
}

/// Compares homology along `maps[d] : source_d → target_d` (chain complexes).
pub fn compare_homology<F: Scalar>(
    source: &ChainComplex<F>,
    target: &ChainComplex<F>,
    maps: &BTreeMap<i64, SparseMatrix<F>>,
) -> HomologyComparison {
    let map = |d: i64| maps.get(&d).cloned().unwrap_or_else(|| SparseMatrix::zero(target.dim(d), source.dim(d)));
    let step = source.direction().step();
    let mut degrees: Vec<i64> = source.dims().keys().chain(target.dims().keys()).copied().collect();
    degrees.sort();
    degrees.dedup();
    let chain_map = degrees.iter().all(|&d| target.differential(d).mul(&map(d)) == map(d + step).mul(&source.differential(d)));
    let mut out = BTreeMap::new();
    for &d in &degrees {
        let (hs, reps) = source.homology_at(d);
        let (ht, _) = target.homology_at(d);
        let prev = d - step;
        let boundaries = target.differential(prev).columns();
        let images: Vec<SVec<F>> = reps.iter().map(|v| map(d).apply(v)).collect();
        let rank_b = SparseMatrix::from_columns(target.dim(d), &boundaries).rank();
        let mut all = boundaries.clone();
        all.extend(images);
        let rank_all = SparseMatrix::from_columns(target.dim(d), &all).rank();
        out.insert(d, (hs, ht, rank_all - rank_b));
    }
    HomologyComparison { chain_map, degrees: out }
}

/// The complex of `P(n)` with its internal differential (possibly zero).
pub fn operad_complex<F: Scalar>(p: &TruncatedOperad<F>, n: usize) -> Result<ChainComplex<F>, Error> {
    let degrees = &p.carrier.component(n).degrees;
    let d = p.differential.as_ref().map_or_else(|| SparseMatrix::zero(p.dim(n), p.dim(n)), |d| d[n].clone());
    Ok(complex_of(degrees, &d)?.0)
}

/// Counit `Cobar(Bar P) → P` on the arity-`n` component and its effect on homology.
pub fn counit_comparison<F: Scalar>(p: &TruncatedOperad<F>, n: usize) -> Result<HomologyComparison, Error> {
    let b = bar(p)?;
    let cb = cobar(&b.cooperad)?;
    let (src, place) = cb.complex(n)?;
    let tgt = operad_complex(p, n)?;
    let tgt_place = place_of(&p.carrier.component(n).degrees);
    let bar_trees = &b.trees.bases;
    let mut triplets: BTreeMap<i64, Vec<(usize, usize, F)>> = BTreeMap::new();
    for (j, t) in cb.trees.bases[n].trees.iter().enumerate() {
        if let Some((v, mut labels)) = evaluate(t, p, bar_trees) {
            let v = sort_labels(p.carrier.component(n), v, &mut labels);
            let (d, pos) = place[j];
            for (i, x) in v {
                let (di, pi) = tgt_place[i];
                if di == d {
                    triplets.entry(d).or_default().push((pi, pos, x));
                }
            }
        }
    }
    let maps = triplets.into_iter().map(|(d, t)| (d, SparseMatrix::from_triplets(tgt.dim(d), src.dim(d), t))).collect();
    Ok(compare_homology(&src, &tgt, &maps))
}

fn place_of(degrees: &[i64]) -> Vec<(i64, usize)> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    degrees
        .iter()
        .map(|&d| {
            let e = counts.entry(d).or_insert(0);
            *e += 1;
            (d, *e - 1)
        })
        .collect()
}

/// Evaluates a cobar tree whose vertices are one-vertex bar trees by composing in `P`;
/// `None` when some vertex has bar weight above one.
fn evaluate<F: Scalar>(t: &Tree, p: &TruncatedOperad<F>, bar_trees: &[crate::operad_core::TreeBasis]) -> Option<(SVec<F>, Vec<usize>)> {
    match t {
        Tree::Leaf(l) => Some((vec![(0, F::one())], vec![*l])),
        Tree::Node { arity, decoration, children } => {
            let inner = &bar_trees[*arity].trees[*decoration];
            let (_, pdec, pkids) = vertex(inner);
            if pkids.iter().any(|c| !matches!(c, Tree::Leaf(_))) {
                return None;
            }
            let mut acc = vec![(pdec, F::one())];
            let mut acc_arity = *arity;
            let mut offset = 0;
            let mut labels = Vec::new();
            for c in children {
                let (v, ls) = evaluate(c, p, bar_trees)?;
                acc = p.compose(acc_arity, offset, &acc, ls.len(), &v);
                acc_arity += ls.len() - 1;
                offset += ls.len();
                labels.extend(ls);
            }
            Some((acc, labels))
        }
    }
}

/// Inclusion `C(sE, s²R) ↪ Bar(P)` on the arity-`n` component and its effect on homology.
pub fn koszul_inclusion_comparison<F: Scalar>(dual: &KoszulDual<F>, q: &QuotientOperad<F>, n: usize) -> Result<HomologyComparison, Error> {
    let b = bar(&q.operad)?;
    let (tgt, place) = b.complex(n)?;
    let c = &dual.cooperad;
    let src_degrees = &c.carrier.component(n).degrees;
    let src_d = c.differential.as_ref().map_or_else(|| SparseMatrix::zero(c.dim(n), c.dim(n)), |d| d[n].clone());
    let (src, src_place) = complex_of(src_degrees, &src_d)?;
    // Generator (k, d) of E sits in P(k) at the position of its one-vertex tree.
    let gen_pos = |k: usize, d: usize| -> usize {
        let t = Tree::Node { arity: k, decoration: d, children: (0..k).map(Tree::Leaf).collect() };
        q.projections[k].basis.iter().position(|&b| q.bases[k].trees[b] == t).expect("generator survives")
    };
    let mut triplets: BTreeMap<i64, Vec<(usize, usize, F)>> = BTreeMap::new();
    for (a, el) in dual.elements[n].iter().enumerate() {
        let (d, pos) = src_place[a];
        for (t, x) in el {
            let mapped = relabel_decorations(t, &gen_pos);
            let j = *b.trees.bases[n].index.get(&mapped).expect("tree in bar basis");
            let (dj, pj) = place[j];
            debug_assert_eq!(dj, d);
            triplets.entry(d).or_default().push((pj, pos, x.clone()));
        }
    }
    let maps = triplets.into_iter().map(|(d, t)| (d, SparseMatrix::from_triplets(tgt.dim(d), src.dim(d), t))).collect();
    Ok(compare_homology(&src, &tgt, &maps))
}

fn relabel_decorations(t: &Tree, f: &impl Fn(usize, usize) -> usize) -> Tree {
    match t {
        Tree::Leaf(_) => t.clone(),
        Tree::Node { arity, decoration, children } => Tree::Node {
            arity: *arity,
            decoration: f(*arity, *decoration),
            children: children.iter().map(|c| relabel_decorations(c, f)).collect(),
        },
    }
}
