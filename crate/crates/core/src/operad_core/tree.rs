use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::{accumulate, svec_from_map, SVec, Scalar};

use super::SigmaObject;

/// Rooted tree with leaves labelled by input names and vertices decorated by
/// basis vectors of a Σ*-object. A tree is *normalized* when the children of every
/// vertex are ordered by their minimal leaf label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tree {
    Leaf(usize),
    Node { arity: usize, decoration: usize, children: Vec<Tree> },
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(l) => write!(f, "{}", l + 1),
            Tree::Node { decoration, children, .. } => {
                write!(f, "g{}(", decoration)?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Linear combination of trees.
pub type TreeVec<F> = BTreeMap<Tree, F>;

pub fn add_term<F: Scalar>(acc: &mut TreeVec<F>, t: Tree, c: F) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(t.clone()).or_insert_with(F::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&t);
    }
}

impl Tree {
    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node { children, .. } => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node { children, .. } => children.iter().map(|c| c.min_leaf()).min().expect("nonempty"),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Number of vertices.
    pub fn weight(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node { children, .. } => 1 + children.iter().map(|c| c.weight()).sum::<usize>(),
        }
    }

    pub fn degree<F: Scalar>(&self, e: &SigmaObject<F>) -> i64 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node { arity, decoration, children } => {
                e.component(*arity).degrees[*decoration] + children.iter().map(|c| c.degree(e)).sum::<i64>()
            }
        }
    }

    /// Vertex decorations in preorder.
    pub fn vertices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<(usize, usize)>) {
        if let Tree::Node { arity, decoration, children } = self {
            out.push((*arity, *decoration));
            children.iter().for_each(|c| c.collect_vertices(out));
        }
    }

    pub fn map_leaves(&self, f: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node { arity, decoration, children } => Tree::Node {
                arity: *arity,
                decoration: *decoration,
                children: children.iter().map(|c| c.map_leaves(f)).collect(),
            },
        }
    }

    /// Relabels leaves to `0..n` preserving order.
    pub fn standardize(&self) -> Tree {
        let mut ls = self.leaves();
        ls.sort();
        let pos: BTreeMap<usize, usize> = ls.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        self.map_leaves(&|l| pos[&l])
    }

    /// Total degree of the vertices visited after the leaf `label` in preorder, and whether it was found.
    fn degree_after_leaf<F: Scalar>(&self, label: usize, e: &SigmaObject<F>, seen: &mut bool) -> i64 {
        match self {
            Tree::Leaf(l) => {
                if *l == label {
                    *seen = true;
                }
                0
            }
            Tree::Node { arity, decoration, children } => {
                let own = if *seen { e.component(*arity).degrees[*decoration] } else { 0 };
                own + children.iter().map(|c| c.degree_after_leaf(label, e, seen)).sum::<i64>()
            }
        }
    }

    fn replace_leaf(&self, label: usize, sub: &Tree) -> Tree {
        match self {
            Tree::Leaf(l) if *l == label => sub.clone(),
            Tree::Leaf(_) => self.clone(),
            Tree::Node { arity, decoration, children } => Tree::Node {
                arity: *arity,
                decoration: *decoration,
                children: children.iter().map(|c| c.replace_leaf(label, sub)).collect(),
            },
        }
    }

    /// Partial composition `self ∘_i other` on standard labels, with its Koszul sign (true = negative).
    pub fn graft<F: Scalar>(&self, i: usize, other: &Tree, e: &SigmaObject<F>) -> (Tree, bool) {
        let s = other.leaf_count();
        let mut seen = false;
        let after = self.degree_after_leaf(i, e, &mut seen);
        let odd = (after * other.degree(e)).rem_euclid(2) == 1;
        let shifted = self.map_leaves(&|l| if l > i { l + s - 1 } else { l });
        let sub = other.map_leaves(&|l| l + i);
        // `shifted` still has a leaf labelled i (labels ≤ i are unchanged).
        (shifted.replace_leaf(i, &sub), odd)
    }

    /// Finds the subtree whose leaf set is exactly `lo..lo+len`, and cuts it off:
    /// returns `(upper, lower, sign)` with `upper ∘_lo lower = self` up to the sign.
    pub fn cut_interval<F: Scalar>(&self, lo: usize, len: usize, e: &SigmaObject<F>) -> Option<(Tree, Tree, bool)> {
        let lower = self.find_interval(lo, len)?;
        let upper_raw = self.replace_subtree(lo, len);
        let upper = upper_raw.map_leaves(&|l| if l > lo { l - (len - 1) } else { l });
        let lower_std = lower.map_leaves(&|l| l - lo);
        let mut seen = false;
        let after = upper.degree_after_leaf(lo, e, &mut seen);
        let odd = (after * lower_std.degree(e)).rem_euclid(2) == 1;
        Some((upper, lower_std, odd))
    }

    /// All ways to cut off a vertex subtree below the root: `(leaf set, upper, lower, sign)`, with
    /// the upper tree keeping the minimum of the leaf set as the merged label, both pieces standardized.
    pub fn subtree_cuts<F: Scalar>(&self, e: &SigmaObject<F>) -> Vec<(Vec<usize>, Tree, Tree, bool)> {
        let mut paths = Vec::new();
        if let Tree::Node { children, .. } = self {
            for (j, c) in children.iter().enumerate() {
                c.collect_node_paths(&mut vec![j], &mut paths);
            }
        }
        paths
            .into_iter()
            .map(|path| {
                let lower = self.at_path(&path).clone();
                let mut set = lower.leaves();
                set.sort();
                let upper = self.replace_at(&path, Tree::Leaf(set[0]));
                let mut seen = false;
                let after = upper.degree_after_leaf(set[0], e, &mut seen);
                let odd = (after * lower.degree(e)).rem_euclid(2) == 1;
                (set, upper.standardize(), lower.standardize(), odd)
            })
            .collect()
    }

    /// Paths (child positions from the root) of all vertices, in preorder.
    pub fn node_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_node_paths(&mut Vec::new(), &mut out);
        out
    }

    fn collect_node_paths(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let Tree::Node { children, .. } = self {
            out.push(path.clone());
            for (j, c) in children.iter().enumerate() {
                path.push(j);
                c.collect_node_paths(path, out);
                path.pop();
            }
        }
    }

    pub fn at_path(&self, path: &[usize]) -> &Tree {
        match (path.split_first(), self) {
            (None, _) => self,
            (Some((&j, rest)), Tree::Node { children, .. }) => children[j].at_path(rest),
            _ => panic!("invalid path"),
        }
    }

    pub fn replace_at(&self, path: &[usize], sub: Tree) -> Tree {
        match (path.split_first(), self) {
            (None, _) => sub,
            (Some((&j, rest)), Tree::Node { arity, decoration, children }) => {
                let mut kids = children.clone();
                kids[j] = children[j].replace_at(rest, sub);
                Tree::Node { arity: *arity, decoration: *decoration, children: kids }
            }
            _ => panic!("invalid path"),
        }
    }

    fn find_interval(&self, lo: usize, len: usize) -> Option<Tree> {
        if let Tree::Node { children, .. } = self {
            let mut ls = self.leaves();
            ls.sort();
            if ls.len() == len && ls[0] == lo && ls[len - 1] == lo + len - 1 {
                return Some(self.clone());
            }
            for c in children {
                if let Some(t) = c.find_interval(lo, len) {
                    return Some(t);
                }
            }
        }
        None
    }

    fn replace_subtree(&self, lo: usize, len: usize) -> Tree {
        if let Tree::Node { arity, decoration, children } = self {
            let mut ls = self.leaves();
            ls.sort();
            if ls.len() == len && ls[0] == lo && ls[len - 1] == lo + len - 1 {
                return Tree::Leaf(lo);
            }
            return Tree::Node {
                arity: *arity,
                decoration: *decoration,
                children: children.iter().map(|c| c.replace_subtree(lo, len)).collect(),
            };
        }
        self.clone()
    }
}

/// Rewrites a tree with arbitrary distinct leaf labels as a combination of normalized trees
/// with the same labels, using the Σ-actions on decorations and Koszul signs.
pub fn normalize<F: Scalar>(t: &Tree, e: &SigmaObject<F>) -> TreeVec<F> {
    match t {
        Tree::Leaf(_) => [(t.clone(), F::one())].into(),
        Tree::Node { arity, decoration, children } => {
            let k = *arity;
            let rep = e.component(k);
            // Expand children into combinations of normalized subtrees.
            let mut partial: Vec<(Vec<Tree>, F)> = vec![(Vec::new(), F::one())];
            for c in children {
                let nc = normalize(c, e);
                let mut next = Vec::new();
                for (prefix, coef) in &partial {
                    for (sub, x) in &nc {
                        let mut p = prefix.clone();
                        p.push(sub.clone());
                        next.push((p, coef.clone() * x.clone()));
                    }
                }
                partial = next;
            }
            let mut out = TreeVec::new();
            for (mut kids, coef) in partial {
                let mut dec: SVec<F> = vec![(*decoration, F::one())];
                let mut c = coef;
                // Bubble sort by minimal leaf; each swap acts by s_q on the decoration.
                for pass in 0..k {
                    for q in 0..k.saturating_sub(1 + pass) {
                        if kids[q].min_leaf() > kids[q + 1].min_leaf() {
                            let odd = (kids[q].degree(e) * kids[q + 1].degree(e)).rem_euclid(2) == 1;
                            if odd {
                                c = -c;
                            }
                            kids.swap(q, q + 1);
                            dec = rep.gens[q].apply(&dec);
                        }
                    }
                }
                for (d, x) in dec {
                    add_term(&mut out, Tree::Node { arity: k, decoration: d, children: kids.clone() }, c.clone() * x);
                }
            }
            out
        }
    }
}

pub fn normalize_vec<F: Scalar>(v: &TreeVec<F>, e: &SigmaObject<F>) -> TreeVec<F> {
    let mut out = TreeVec::new();
    for (t, c) in v {
        for (u, x) in normalize(t, e) {
            add_term(&mut out, u, c.clone() * x);
        }
    }
    out
}

/// Normalized trees on the given leaf labels (sorted ascending), over the reduced generators of `e`.
pub fn enumerate_trees<F: Scalar>(labels: &[usize], e: &SigmaObject<F>) -> Vec<Tree> {
    if labels.len() == 1 {
        return vec![Tree::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    for k in 2..=labels.len() {
        let dim = e.dim(k);
        if dim == 0 {
            continue;
        }
        for blocks in set_partitions(labels, k) {
            let mut choices: Vec<Vec<Tree>> = vec![Vec::new()];
            for b in &blocks {
                let subs = enumerate_trees(b, e);
                choices = choices
                    .into_iter()
                    .flat_map(|pre| subs.iter().map(move |s| { let mut p = pre.clone(); p.push(s.clone()); p }))
                    .collect();
            }
            for d in 0..dim {
                for kids in &choices {
                    out.push(Tree::Node { arity: k, decoration: d, children: kids.clone() });
                }
            }
        }
    }
    out
}

/// Partitions of `labels` into exactly `k` nonempty blocks, blocks ordered by minimum,
/// each block sorted.
pub fn set_partitions(labels: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize], k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest.is_empty() {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + rest.len() < k {
            return;
        }
        let x = rest[0];
        for b in 0..cur.len() {
            cur[b].push(x);
            rec(&rest[1..], k, cur, out);
            cur[b].pop();
        }
        if cur.len() < k {
            cur.push(vec![x]);
            rec(&rest[1..], k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(labels, k, &mut Vec::new(), &mut out);
    out
}

/// Applies `s_q` (exchange of labels q and q+1) to a normalized tree.
pub fn act_transposition<F: Scalar>(t: &Tree, q: usize, e: &SigmaObject<F>) -> TreeVec<F> {
    let swapped = t.map_leaves(&|l| if l == q { q + 1 } else if l == q + 1 { q } else { l });
    normalize(&swapped, e)
}

pub fn treevec_to_svec<F: Scalar>(v: &TreeVec<F>, index: &std::collections::HashMap<Tree, usize>) -> SVec<F> {
    let mut acc = BTreeMap::new();
    for (t, c) in v {
        let i = *index.get(t).unwrap_or_else(|| panic!("tree {} outside the basis", t));
        accumulate(&mut acc, c, &[(i, F::one())]);
    }
    svec_from_map(acc)
}
