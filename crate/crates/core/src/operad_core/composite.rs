use std::collections::HashMap;

use crate::exactalg::{SVec, Scalar, SparseMatrix};
use crate::symcore::SigmaRep;

use super::tree::set_partitions;
use super::{sort_labels, tensor_expand, SigmaObject};

/// Basis vector of `(M ∘ N)(n)`: a top element of `M(k)` whose slot `j` receives the element
/// `children[j]` of `N(|blocks[j]|)` on the inputs `blocks[j]`. Blocks are ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositeKey {
    pub top_arity: usize,
    pub top: usize,
    pub blocks: Vec<Vec<usize>>,
    pub children: Vec<usize>,
}

/// Basis of `(M ∘ N)(n)` in one arity, with the labelled normalizer.
#[derive(Clone, Debug)]
pub struct CompositeBasis<F: Scalar> {
    pub n: usize,
    pub top: SigmaObject<F>,
    pub bottom: SigmaObject<F>,
    pub keys: Vec<CompositeKey>,
    pub index: HashMap<CompositeKey, usize>,
}

impl<F: Scalar> CompositeBasis<F> {
    pub fn new(top: &SigmaObject<F>, bottom: &SigmaObject<F>, n: usize) -> Self {
        let mut keys = Vec::new();
        let labels: Vec<usize> = (0..n).collect();
        for k in 1..=n.min(top.max_arity()) {
            let dk = top.dim(k);
            if dk == 0 {
                continue;
            }
            for blocks in set_partitions(&labels, k) {
                if blocks.iter().any(|b| b.len() > bottom.max_arity() || bottom.dim(b.len()) == 0) {
                    continue;
                }
                let sizes: Vec<SVec<F>> =
                    blocks.iter().map(|b| (0..bottom.dim(b.len())).map(|j| (j, F::one())).collect()).collect();
                let combos = tensor_expand(&sizes);
                for m in 0..dk {
                    for (children, _) in &combos {
                        keys.push(CompositeKey { top_arity: k, top: m, blocks: blocks.clone(), children: children.clone() });
                    }
                }
            }
        }
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        CompositeBasis { n, top: top.clone(), bottom: bottom.clone(), keys, index }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        let key = &self.keys[i];
        self.top.component(key.top_arity).degrees[key.top]
            + key.children.iter().zip(&key.blocks).map(|(c, b)| self.bottom.component(b.len()).degrees[*c]).sum::<i64>()
    }

    pub fn weight(&self, i: usize) -> usize {
        let key = &self.keys[i];
        self.top.weights[key.top_arity][key.top]
            + key.children.iter().zip(&key.blocks).map(|(c, b)| self.bottom.weights[b.len()][*c]).sum::<usize>()
    }

    /// Expresses `top(child_1, …, child_k)` in the basis. Each child is `(vector, labels)` with
    /// labels listed in slot order; together the labels must be `0..n`.
    pub fn element(&self, top_arity: usize, top: &[(usize, F)], children: &[(SVec<F>, Vec<usize>)]) -> SVec<F> {
        assert_eq!(children.len(), top_arity);
        let mut kids: Vec<(SVec<F>, Vec<usize>, i64)> = children
            .iter()
            .map(|(v, labels)| {
                let mut ls = labels.clone();
                let sorted = sort_labels(self.bottom.component(labels.len()), v.clone(), &mut ls);
                let deg = sorted.first().map_or(0, |(b, _)| self.bottom.component(ls.len()).degrees[*b]);
                (sorted, ls, deg)
            })
            .collect();
        let mut t = top.to_vec();
        let mut odd = false;
        let k = top_arity;
        for pass in 0..k {
            for q in 0..k.saturating_sub(1 + pass) {
                if kids[q].1[0] > kids[q + 1].1[0] {
                    odd ^= (kids[q].2 * kids[q + 1].2).rem_euclid(2) == 1;
                    kids.swap(q, q + 1);
                    t = self.top.component(k).gens[q].apply(&t);
                }
            }
        }
        let mut factors = vec![t];
        factors.extend(kids.iter().map(|c| c.0.clone()));
        let blocks: Vec<Vec<usize>> = kids.iter().map(|c| c.1.clone()).collect();
        let mut out = std::collections::BTreeMap::new();
        for (idx, c) in tensor_expand(&factors) {
            let key = CompositeKey { top_arity: k, top: idx[0], blocks: blocks.clone(), children: idx[1..].to_vec() };
            let i = self.index[&key];
            let e = out.entry(i).or_insert_with(F::zero);
            *e += if odd { -c } else { c };
        }
        out.into_iter().filter(|(_, x): &(usize, F)| !x.is_zero()).collect()
    }

    /// Action of `s_q` on a basis vector.
    pub fn act_transposition(&self, i: usize, q: usize) -> SVec<F> {
        let key = &self.keys[i];
        let swap = |l: usize| if l == q { q + 1 } else if l == q + 1 { q } else { l };
        let children: Vec<(SVec<F>, Vec<usize>)> =
            key.children.iter().zip(&key.blocks).map(|(c, b)| (vec![(*c, F::one())], b.iter().map(|&l| swap(l)).collect())).collect();
        self.element(key.top_arity, &[(key.top, F::one())], &children)
    }

    pub fn sigma_rep(&self) -> SigmaRep<F> {
        let gens = (0..self.n.saturating_sub(1))
            .map(|q| {
                let cols: Vec<SVec<F>> = (0..self.dim()).map(|i| self.act_transposition(i, q)).collect();
                SparseMatrix::from_columns(self.dim(), &cols)
            })
            .collect();
        SigmaRep { n: self.n, degrees: (0..self.dim()).map(|i| self.degree(i)).collect(), gens }
    }

    pub fn key_name(&self, i: usize) -> String {
        let key = &self.keys[i];
        let kids: Vec<String> = key
            .children
            .iter()
            .zip(&key.blocks)
            .map(|(c, b)| {
                let ls: Vec<String> = b.iter().map(|l| (l + 1).to_string()).collect();
                format!("{}[{}]", self.bottom.names[b.len()][*c], ls.join(","))
            })
            .collect();
        format!("{}({})", self.top.names[key.top_arity][key.top], kids.join(", "))
    }
}

/// Composite product `M ∘ N` truncated at `max_arity`, with its bases.
pub fn composite_product<F: Scalar>(
    m: &SigmaObject<F>,
    n: &SigmaObject<F>,
    max_arity: usize,
) -> (SigmaObject<F>, Vec<CompositeBasis<F>>) {
    let mut out = SigmaObject::zero(max_arity);
    let mut bases = Vec::new();
    for a in 0..=max_arity {
        let b = CompositeBasis::new(m, n, a);
        let names = (0..b.dim()).map(|i| b.key_name(i)).collect();
        let weights = (0..b.dim()).map(|i| b.weight(i)).collect();
        out.set(b.sigma_rep(), Some(names), Some(weights));
        bases.push(b);
    }
    (out, bases)
}
