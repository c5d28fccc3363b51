//! Truncated operads and cooperads, free and quotient operads, Koszul duals and composite products.

mod cache;
mod classical;
mod composite;
mod cooperad;
mod free;
mod operad;
pub mod tree;

pub use cache::classical_koszul_dual;
pub use classical::{ClassicalOperad, classical_presentation, classical_operad};
pub use composite::{CompositeBasis, CompositeKey, composite_product};
pub use cooperad::{KoszulDual, TruncatedCooperad, cofree_cooperad, interval_labels, koszul_dual_cooperad, subsets};
pub use free::{graft_vec, tree_name, tree_weight, FreeOperad, TreeBasis, OperadPresentation, QuotientOperad, free_operad, quotient_presentation};
pub use operad::TruncatedOperad;
pub use tree::Tree;

use std::collections::BTreeMap;

use crate::exactalg::{SVec, Scalar};
use crate::symcore::{sigma_tensor as sigma_tensor_rep, SigmaRep};

/// Graded Σ*-object truncated at `max_arity`, with a weight and a name for each basis vector.
#[derive(Clone, Debug)]
pub struct SigmaObject<F: Scalar> {
    pub components: Vec<SigmaRep<F>>,
    pub weights: Vec<Vec<usize>>,
    pub names: Vec<Vec<String>>,
}

impl<F: Scalar> SigmaObject<F> {
    pub fn zero(max_arity: usize) -> Self {
        SigmaObject {
            components: (0..=max_arity).map(SigmaRep::zero).collect(),
            weights: vec![Vec::new(); max_arity + 1],
            names: vec![Vec::new(); max_arity + 1],
        }
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &SigmaRep<F> {
        &self.components[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.components.get(n).map_or(0, |c| c.dim())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    /// Installs a component; names default to `x0, x1, …` and weights to 1.
    pub fn set(&mut self, rep: SigmaRep<F>, names: Option<Vec<String>>, weights: Option<Vec<usize>>) {
        let n = rep.n;
        let d = rep.dim();
        self.names[n] = names.unwrap_or_else(|| (0..d).map(|i| format!("x{}", i)).collect());
        self.weights[n] = weights.unwrap_or_else(|| vec![1; d]);
        self.components[n] = rep;
    }

    /// Raises every degree by `shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.degrees.iter_mut().for_each(|d| *d += shift);
        }
        out
    }

    pub fn truncated(&self, max_arity: usize) -> Self {
        let mut out = Self::zero(max_arity);
        for n in 0..=max_arity.min(self.max_arity()) {
            out.components[n] = self.components[n].clone();
            out.weights[n] = self.weights[n].clone();
            out.names[n] = self.names[n].clone();
        }
        out
    }
}

/// Day-convolution tensor product of two Σ*-objects, truncated at `max_arity`.
pub fn sigma_tensor<F: Scalar>(m: &SigmaObject<F>, n: &SigmaObject<F>, max_arity: usize) -> SigmaObject<F> {
    let to_map = |o: &SigmaObject<F>| -> BTreeMap<usize, SigmaRep<F>> { o.components.iter().cloned().enumerate().collect() };
    let (a, b) = (to_map(m), to_map(n));
    let mut out = SigmaObject::zero(max_arity);
    for k in 0..=max_arity {
        out.set(sigma_tensor_rep(&a, &b, k), None, None);
    }
    out
}

/// Bubble-sorts slot labels into increasing order, acting on `v` by `s_q` at each swap.
/// Afterwards `v` with the sorted labels represents the same labelled element.
pub fn sort_labels<F: Scalar>(rep: &SigmaRep<F>, mut v: SVec<F>, labels: &mut [usize]) -> SVec<F> {
    let k = labels.len();
    for pass in 0..k {
        for q in 0..k.saturating_sub(1 + pass) {
            if labels[q] > labels[q + 1] {
                labels.swap(q, q + 1);
                v = rep.gens[q].apply(&v);
            }
        }
    }
    v
}

/// Multiplies coefficients over a list of sparse vectors, producing all index tuples.
pub fn tensor_expand<F: Scalar>(factors: &[SVec<F>]) -> Vec<(Vec<usize>, F)> {
    let mut out: Vec<(Vec<usize>, F)> = vec![(Vec::new(), F::one())];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for (idx, c) in &out {
            for (j, x) in f {
                let mut i2 = idx.clone();
                i2.push(*j);
                next.push((i2, c.clone() * x.clone()));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fp, Rational};

    type Q = Rational;

    fn binary(rep: SigmaRep<Q>) -> SigmaObject<Q> {
        let mut e = SigmaObject::zero(2);
        e.set(rep, None, None);
        e
    }

    #[test]
    fn free_operad_dimensions() {
        let triv = free_operad(&binary(SigmaRep::trivial(2, 0)), 5).unwrap();
        assert_eq!(triv.operad.dims(), vec![0, 1, 1, 3, 15, 105]);
        let reg = free_operad(&binary(SigmaRep::regular(2, 0)), 4).unwrap();
        assert_eq!(reg.operad.dims(), vec![0, 1, 2, 12, 120]);
    }

    #[test]
    fn free_operad_axioms_including_odd_generators() {
        free_operad(&binary(SigmaRep::regular(2, 0)), 4).unwrap().operad.check_axioms().unwrap();
        free_operad(&binary(SigmaRep::regular(2, 1)), 4).unwrap().operad.check_axioms().unwrap();
        free_operad(&binary(SigmaRep::sign(2, 1)), 5).unwrap().operad.check_axioms().unwrap();
    }

    #[test]
    fn graft_of_normalized_trees_is_normalized() {
        let e = binary(SigmaRep::regular(2, 1));
        let free = free_operad(&e, 5).unwrap();
        for a in &free.bases[3].trees {
            for b in &free.bases[3].trees {
                for i in 0..3 {
                    let (t, _) = a.graft(i, b, &free.generators);
                    let nt = tree::normalize(&t, &free.generators);
                    assert_eq!(nt.len(), 1);
                    assert_eq!(nt.get(&t), Some(&Q::from_i64(1)));
                }
            }
        }
    }

    #[test]
    fn classical_operads() {
        let expect = [
            (ClassicalOperad::Com, vec![0, 1, 1, 1, 1, 1]),
            (ClassicalOperad::Asc, vec![0, 1, 2, 6, 24, 120]),
            (ClassicalOperad::Lie, vec![0, 1, 1, 2, 6, 24]),
        ];
        for (kind, dims) in expect {
            let q = classical_operad::<Q>(kind, 5).unwrap();
            assert_eq!(q.operad.dims(), dims, "{kind}");
            q.operad.check_axioms().unwrap();
        }
    }

    #[test]
    fn classical_operads_mod_p() {
        let q = classical_operad::<Fp<7>>(ClassicalOperad::Lie, 4).unwrap();
        assert_eq!(q.operad.dims(), vec![0, 1, 1, 2, 6]);
        q.operad.check_axioms().unwrap();
    }

    #[test]
    fn cofree_cooperad_axioms() {
        let c = cofree_cooperad(&binary(SigmaRep::regular(2, 1)), 4).unwrap();
        assert_eq!(c.dims(), vec![0, 1, 2, 12, 120]);
        c.check_axioms().unwrap();
    }

    #[test]
    fn koszul_dual_dimensions_and_degrees() {
        let expect = [
            (ClassicalOperad::Lie, vec![0, 1, 1, 1, 1, 1, 1]),
            (ClassicalOperad::Com, vec![0, 1, 1, 2, 6, 24]),
            (ClassicalOperad::Asc, vec![0, 1, 2, 6, 24, 120]),
        ];
        for (kind, dims) in expect {
            let kd = koszul_dual_cooperad::<Q>(&classical_presentation(kind), dims.len() - 1).unwrap();
            let c = &kd.cooperad;
            assert_eq!(c.dims(), dims, "{kind}");
            for n in 1..dims.len() {
                assert!(c.carrier.component(n).degrees.iter().all(|&d| d == n as i64 - 1));
                assert!(c.carrier.weights[n].iter().all(|&w| w == n - 1));
            }
            c.check_axioms().unwrap();
        }
    }

    #[test]
    fn koszul_dual_decompositions_are_exact() {
        let kd = koszul_dual_cooperad::<Q>(&classical_presentation(ClassicalOperad::Asc), 4).unwrap();
        let se = &kd.suspended;
        for (col, v) in kd.elements[4].iter().enumerate() {
            for s in 2..4 {
                let r = 5 - s;
                for i in 0..r {
                    let mut direct = tree::TreeVec::new();
                    for (t, c) in v {
                        if let Some((up, low, odd)) = t.cut_interval(i, s, se) {
                            tree::add_term(&mut direct, Tree::Node { arity: 0, decoration: 0, children: vec![up, low] }, if odd { -c.clone() } else { c.clone() });
                        }
                    }
                    let image = kd.cooperad.decompose(r, s, i, &[(col, Q::from_i64(1))]);
                    let mut rebuilt = tree::TreeVec::new();
                    let ds = kd.elements[s].len();
                    for (idx, c) in image {
                        for (ta, ca) in &kd.elements[r][idx / ds] {
                            for (tb, cb) in &kd.elements[s][idx % ds] {
                                let pair = Tree::Node { arity: 0, decoration: 0, children: vec![ta.clone(), tb.clone()] };
                                tree::add_term(&mut rebuilt, pair, c.clone() * ca.clone() * cb.clone());
                            }
                        }
                    }
                    assert_eq!(direct, rebuilt);
                }
            }
        }
    }

    #[test]
    fn composite_of_com_with_itself_counts_partitions() {
        let com = classical_operad::<Q>(ClassicalOperad::Com, 4).unwrap().operad.carrier;
        let (cc, _) = composite_product(&com, &com, 4);
        assert_eq!(cc.dims(), vec![0, 1, 2, 5, 15]);
        for n in 1..=4 {
            cc.component(n).validate().unwrap();
        }
        let asc = classical_operad::<Q>(ClassicalOperad::Asc, 3).unwrap().operad.carrier;
        let (aa, _) = composite_product(&asc, &asc, 3);
        // 1·(1) ; 2 + 2·2 ; 6 + 3·2·2 + 6
        assert_eq!(aa.dims(), vec![0, 1, 4, 24]);
        aa.component(3).validate().unwrap();
    }

    #[test]
    fn sigma_tensor_of_units() {
        let mut unit = SigmaObject::<Q>::zero(2);
        unit.set(SigmaRep::trivial(1, 0), None, None);
        let t = sigma_tensor(&unit, &unit, 2);
        assert_eq!(t.dims(), vec![0, 0, 2]);
    }
}
