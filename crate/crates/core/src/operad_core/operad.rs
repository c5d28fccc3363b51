use std::collections::HashMap;

use crate::exactalg::{svec_add, svec_scale, SVec, Scalar, SparseMatrix};
use crate::Error;

use super::{sort_labels, SigmaObject};

/// Reduced operad known up to a maximal arity: `P(0) = 0`, `P(1) = 𝕜·id`.
/// `compositions[(r, s, i)]` is the matrix of `∘_i : P(r) ⊗ P(s) → P(r+s−1)` for `r, s ≥ 2`,
/// with column index `a·dim P(s) + b`. Slots are 0-based.
#[derive(Clone, Debug)]
pub struct TruncatedOperad<F: Scalar> {
    pub name: String,
    pub carrier: SigmaObject<F>,
    pub compositions: HashMap<(usize, usize, usize), SparseMatrix<F>>,
    /// Optional internal differential of degree −1, one matrix per arity.
    pub differential: Option<Vec<SparseMatrix<F>>>,
}

impl<F: Scalar> TruncatedOperad<F> {
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

    /// `a ∘_i b` for `a ∈ P(r)`, `b ∈ P(s)`.
    pub fn compose(&self, r: usize, i: usize, a: &[(usize, F)], s: usize, b: &[(usize, F)]) -> SVec<F> {
        assert!(i < r && r + s - 1 <= self.max_arity(), "composition out of range");
        if r == 1 {
            return a.iter().fold(Vec::new(), |acc, (_, c)| svec_add(&acc, c, b));
        }
        if s == 1 {
            return b.iter().fold(Vec::new(), |acc, (_, c)| svec_add(&acc, c, a));
        }
        let m = &self.compositions[&(r, s, i)];
        let ds = self.dim(s);
        let mut x = Vec::new();
        for (ia, ca) in a {
            for (ib, cb) in b {
                x.push((ia * ds + ib, ca.clone() * cb.clone()));
            }
        }
        x.sort_by_key(|e| e.0);
        m.apply(&x)
    }

    /// Composition of labelled elements: `b` (labels `lb`, a permutation of `0..s`) is inserted into
    /// the slot of `a` carrying label `i`; returns the result with standard labels.
    pub fn compose_labelled(
        &self,
        r: usize,
        a: &[(usize, F)],
        la: &[usize],
        i: usize,
        s: usize,
        b: &[(usize, F)],
        lb: &[usize],
    ) -> SVec<F> {
        let p = la.iter().position(|&l| l == i).expect("label present");
        let raw = self.compose(r, p, a, s, b);
        let shift = |l: usize| if l > i { l + s - 1 } else { l };
        let mut labels: Vec<usize> = la[..p].iter().map(|&l| shift(l)).collect();
        labels.extend(lb.iter().map(|&l| l + i));
        labels.extend(la[p + 1..].iter().map(|&l| shift(l)));
        sort_labels(self.carrier.component(r + s - 1), raw, &mut labels)
    }

    fn basis_vec(b: usize) -> SVec<F> {
        vec![(b, F::one())]
    }

    /// Unit, sequential and parallel associativity, equivariance, and the Leibniz rule when a
    /// differential is present.
    pub fn check_axioms(&self) -> Result<(), Error> {
        let max = self.max_arity();
        if max >= 1 && self.dim(1) != 1 {
            return Err(Error::Invalid(format!("{}: P(1) must be one-dimensional", self.name)));
        }
        if self.dim(0) != 0 {
            return Err(Error::Invalid(format!("{}: P(0) must vanish", self.name)));
        }
        for n in 1..=max {
            self.carrier.component(n).validate()?;
        }
        let sign = |odd: bool| if odd { -F::one() } else { F::one() };
        for r in 2..=max {
            for s in 2..=max + 1 - r {
                for t in 2..=(max + 2).saturating_sub(r + s) {
                    if r + s + t - 2 > max {
                        continue;
                    }
                    for a in 0..self.dim(r) {
                        for b in 0..self.dim(s) {
                            for c in 0..self.dim(t) {
                                let (va, vb, vc) = (Self::basis_vec(a), Self::basis_vec(b), Self::basis_vec(c));
                                for i in 0..r {
                                    let ab = self.compose(r, i, &va, s, &vb);
                                    for j in 0..s {
                                        let lhs = self.compose(r + s - 1, i + j, &ab, t, &vc);
                                        let bc = self.compose(s, j, &vb, t, &vc);
                                        let rhs = self.compose(r, i, &va, s + t - 1, &bc);
                                        if lhs != rhs {
                                            return Err(Error::Invalid(format!(
                                                "{}: sequential associativity fails (r={r}, s={s}, t={t}, i={i}, j={j})",
                                                self.name
                                            )));
                                        }
                                    }
                                    for k in i + 1..r {
                                        let lhs = self.compose(r + s - 1, k + s - 1, &ab, t, &vc);
                                        let ac = self.compose(r, k, &va, t, &vc);
                                        let odd = (self.degree(s, b) * self.degree(t, c)).rem_euclid(2) == 1;
                                        let rhs = svec_scale(&sign(odd), &self.compose(r + t - 1, i, &ac, s, &vb));
                                        if lhs != rhs {
                                            return Err(Error::Invalid(format!(
                                                "{}: parallel associativity fails (r={r}, s={s}, t={t}, i={i}, k={k})",
                                                self.name
                                            )));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for r in 2..=max {
            for s in 2..=max + 1 - r {
                let std_r: Vec<usize> = (0..r).collect();
                let std_s: Vec<usize> = (0..s).collect();
                for a in 0..self.dim(r) {
                    for b in 0..self.dim(s) {
                        let (va, vb) = (Self::basis_vec(a), Self::basis_vec(b));
                        for i in 0..r {
                            for q in 0..r - 1 {
                                let acted = self.carrier.component(r).gens[q].apply(&va);
                                let lhs = self.compose(r, i, &acted, s, &vb);
                                let mut la = std_r.clone();
                                la.swap(q, q + 1);
                                let rhs = self.compose_labelled(r, &va, &la, i, s, &vb, &std_s);
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!("{}: equivariance in the outer slot fails", self.name)));
                                }
                            }
                            for q in 0..s - 1 {
                                let acted = self.carrier.component(s).gens[q].apply(&vb);
                                let lhs = self.compose(r, i, &va, s, &acted);
                                let mut lb = std_s.clone();
                                lb.swap(q, q + 1);
                                let rhs = self.compose_labelled(r, &va, &std_r, i, s, &vb, &lb);
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!("{}: equivariance in the inner slot fails", self.name)));
                                }
                            }
                            if let Some(d) = &self.differential {
                                let lhs = d[r + s - 1].apply(&self.compose(r, i, &va, s, &vb));
                                let t1 = self.compose(r, i, &d[r].apply(&va), s, &vb);
                                let t2 = self.compose(r, i, &va, s, &d[s].apply(&vb));
                                let rhs = svec_add(&t1, &sign(self.degree(r, a).rem_euclid(2) == 1), &t2);
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!("{}: differential is not a derivation", self.name)));
                                }
                            }
                        }
                    }
                }
            }
        }
        if let Some(d) = &self.differential {
            for n in 1..=max {
                if !d[n].mul(&d[n]).is_zero() {
                    return Err(Error::NotAComplex(format!("{}: d² ≠ 0 in arity {n}", self.name)));
                }
                for q in 0..n.saturating_sub(1) {
                    let g = &self.carrier.component(n).gens[q];
                    if d[n].mul(g) != g.mul(&d[n]) {
                        return Err(Error::Invalid(format!("{}: differential is not equivariant", self.name)));
                    }
                }
            }
        }
        Ok(())
    }
}
