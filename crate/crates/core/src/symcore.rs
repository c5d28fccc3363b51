//! Permutations, shuffles, symmetric-group representations, coinvariants and induction.
//!
//! Representations are right actions on column vectors: `act(σ∘τ) = act(τ)·act(σ)`.
//! They are stored through the adjacent transpositions `s_1, …, s_{n−1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::{Rref, SVec, Scalar, SparseMatrix};
use crate::Error;

/// Bijection of `{0, …, n−1}`; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Invalid(format!("{:?} is not a permutation", images)));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Adjacent transposition exchanging `q` and `q + 1` (0-based).
    pub fn transposition(n: usize, q: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(q, q + 1);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inversions(&self) -> usize {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| self.images[i] > self.images[j]).count()
    }

    pub fn is_odd(&self) -> bool {
        self.inversions() % 2 == 1
    }

    /// Indices `q` with `self = s_{w[last]} ∘ … ∘ s_{w[0]}`.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut seq = self.images.clone();
        let mut word = Vec::new();
        let n = seq.len();
        for pass in 0..n {
            for q in 0..n.saturating_sub(1 + pass) {
                if seq[q] > seq[q + 1] {
                    seq.swap(q, q + 1);
                    word.push(q);
                }
            }
        }
        word
    }

    /// All permutations of `n` letters in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation { images: cur.clone() });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Permutations increasing on each consecutive block of the given sizes, in lexicographic order.
pub fn shuffles(blocks: &[usize]) -> Vec<Permutation> {
    let r: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; r];
    let mut used = vec![false; r];
    // Fill positions left to right; within a block values must increase.
    fn rec(pos: usize, r: usize, starts: &[bool], images: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if pos == r {
            out.push(Permutation { images: images.clone() });
            return;
        }
        let lower = if starts[pos] { 0 } else { images[pos - 1] + 1 };
        for v in lower..r {
            if !used[v] {
                used[v] = true;
                images[pos] = v;
                rec(pos + 1, r, starts, images, used, out);
                used[v] = false;
            }
        }
    }
    let mut starts = vec![false; r];
    let mut off = 0;
    for &b in blocks {
        if b > 0 {
            starts[off] = true;
        }
        off += b;
    }
    rec(0, r, &starts, &mut images, &mut used, &mut out);
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Koszul sign of reordering homogeneous factors: `order[j]` is the old position of the new `j`-th factor.
pub fn koszul_sign(degrees: &[i64], order: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[order[a]].rem_euclid(2) == 1 && degrees[order[b]].rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

/// Finite-dimensional graded right `Σ_n`-representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRep<F: Scalar> {
    pub n: usize,
    /// Internal degree of each basis vector.
    pub degrees: Vec<i64>,
    /// Matrices of `s_1, …, s_{n−1}`.
    pub gens: Vec<SparseMatrix<F>>,
}

impl<F: Scalar> SigmaRep<F> {
    pub fn new(n: usize, degrees: Vec<i64>, gens: Vec<SparseMatrix<F>>) -> Result<Self, Error> {
        let rep = SigmaRep { n, degrees, gens };
        rep.validate()?;
        Ok(rep)
    }

    pub fn zero(n: usize) -> Self {
        SigmaRep { n, degrees: Vec::new(), gens: vec![SparseMatrix::zero(0, 0); n.saturating_sub(1)] }
    }

    pub fn trivial(n: usize, degree: i64) -> Self {
        SigmaRep { n, degrees: vec![degree], gens: vec![SparseMatrix::identity(1); n.saturating_sub(1)] }
    }

    pub fn sign(n: usize, degree: i64) -> Self {
        SigmaRep { n, degrees: vec![degree], gens: vec![SparseMatrix::identity(1).scale(&-F::one()); n.saturating_sub(1)] }
    }

    /// Regular representation; basis vector `k` is the `k`-th permutation in lexicographic order.
    pub fn regular(n: usize, degree: i64) -> Self {
        let perms = Permutation::all(n);
        let index: BTreeMap<Permutation, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let gens = (0..n.saturating_sub(1))
            .map(|q| {
                let s = Permutation::transposition(n, q);
                let entries = perms.iter().enumerate().map(|(i, p)| (index[&p.compose(&s)], i, F::one()));
                SparseMatrix::from_triplets(perms.len(), perms.len(), entries)
            })
            .collect();
        SigmaRep { n, degrees: vec![degree; perms.len()], gens }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Checks the Coxeter relations and degree preservation.
    pub fn validate(&self) -> Result<(), Error> {
        let d = self.dim();
        if self.gens.len() != self.n.saturating_sub(1) {
            return Err(Error::Invalid(format!("expected {} generators, got {}", self.n.saturating_sub(1), self.gens.len())));
        }
        let id = SparseMatrix::identity(d);
        for (q, g) in self.gens.iter().enumerate() {
            if g.shape() != (d, d) {
                return Err(Error::Shape(format!("generator s_{} has shape {:?}", q + 1, g.shape())));
            }
            if g.mul(g) != id {
                return Err(Error::Invalid(format!("s_{} does not square to the identity", q + 1)));
            }
            for (r, c, _) in g.entries() {
                if self.degrees[r] != self.degrees[c] {
                    return Err(Error::Invalid(format!("s_{} does not preserve degree", q + 1)));
                }
            }
        }
        for a in 0..self.gens.len() {
            for b in a + 1..self.gens.len() {
                let (x, y) = (&self.gens[a], &self.gens[b]);
                let ok = if b == a + 1 { x.mul(y).mul(x) == y.mul(x).mul(y) } else { x.mul(y) == y.mul(x) };
                if !ok {
                    return Err(Error::Invalid(format!("braid relation fails for s_{}, s_{}", a + 1, b + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn act(&self, p: &Permutation) -> SparseMatrix<F> {
        assert_eq!(p.len(), self.n);
        let mut m = SparseMatrix::identity(self.dim());
        // p = s_{w_last} ∘ … ∘ s_{w_0}, so act(p) = act(s_{w_0}) ⋯ act(s_{w_last}).
        for &q in p.adjacent_word().iter().rev() {
            m = self.gens[q].mul(&m);
        }
        m
    }

    /// Coinvariants: quotient by the span of `x − x·σ`.
    pub fn coinvariants(&self) -> Result<Coinvariants<F>, Error> {
        let p = F::characteristic();
        if p != 0 && (p as usize) <= self.n {
            return Err(Error::Characteristic(format!("characteristic {} divides {}!", p, self.n)));
        }
        let relations = self.gens.iter().flat_map(|g| {
            let id = SparseMatrix::<F>::identity(self.dim());
            id.sub(g).columns().into_iter()
        });
        Ok(Coinvariants::from_relations(self.dim(), relations))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let degrees = self.degrees.iter().flat_map(|a| other.degrees.iter().map(move |b| a + b)).collect();
        let gens = self.gens.iter().zip(&other.gens).map(|(a, b)| a.kron(b)).collect();
        SigmaRep { n: self.n, degrees, gens }
    }
}

/// Quotient of a based space by a span of relations, with a deterministic complement basis.
#[derive(Clone, Debug)]
pub struct Coinvariants<F: Scalar> {
    /// Ambient coordinates whose classes form the quotient basis.
    pub basis: Vec<usize>,
    /// Quotient map, `basis.len() × ambient`.
    pub projection: SparseMatrix<F>,
}

impl<F: Scalar> Coinvariants<F> {
    pub fn from_relations(dim: usize, relations: impl Iterator<Item = SVec<F>>) -> Self {
        let rref = Rref::of_rows(dim, relations);
        let pivots: std::collections::BTreeSet<usize> = rref.pivots().into_iter().collect();
        let basis: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
        let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut entries = Vec::new();
        for &c in &basis {
            entries.push((pos[&c], c, F::one()));
        }
        for row in &rref.rows {
            let p = row[0].0;
            for (c, v) in &row[1..] {
                entries.push((pos[c], p, -v.clone()));
            }
        }
        let projection = SparseMatrix::from_triplets(basis.len(), dim, entries);
        Coinvariants { basis, projection }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Induced representation from `Σ_{i_1} × … × Σ_{i_k}` to `Σ_r`.
/// Basis vector index is `tensor_index * shuffles.len() + shuffle_index`.
#[derive(Clone, Debug)]
pub struct Induced<F: Scalar> {
    pub rep: SigmaRep<F>,
    pub blocks: Vec<usize>,
    pub shuffles: Vec<Permutation>,
}

pub fn induce<F: Scalar>(reps: &[SigmaRep<F>], r: usize) -> Result<Induced<F>, Error> {
    let blocks: Vec<usize> = reps.iter().map(|x| x.n).collect();
    if blocks.iter().sum::<usize>() != r {
        return Err(Error::Arity(format!("blocks {:?} do not sum to {}", blocks, r)));
    }
    let shs = shuffles(&blocks);
    let sh_index: BTreeMap<Permutation, usize> = shs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    // Tensor basis: mixed radix over the factor dimensions.
    let dims: Vec<usize> = reps.iter().map(|x| x.dim()).collect();
    let tdim: usize = dims.iter().product();
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for &d in &dims {
        tuples = tuples.into_iter().flat_map(|t| (0..d).map(move |i| { let mut u = t.clone(); u.push(i); u })).collect();
    }
    let tindex = |t: &[usize]| t.iter().zip(&dims).fold(0, |acc, (i, d)| acc * d + i);
    let degrees: Vec<i64> = tuples
        .iter()
        .flat_map(|t| {
            let deg: i64 = t.iter().zip(reps).map(|(i, rep)| rep.degrees[*i]).sum();
            std::iter::repeat(deg).take(shs.len())
        })
        .collect();
    let mut offsets = Vec::new();
    let mut off = 0;
    for &b in &blocks {
        offsets.push(off);
        off += b;
    }
    let slot_block: Vec<usize> = blocks.iter().enumerate().flat_map(|(b, &len)| std::iter::repeat(b).take(len)).collect();
    let block_of = |pos: usize| slot_block[pos];
    let mut gens = Vec::new();
    for q in 0..r.saturating_sub(1) {
        let mut entries = Vec::new();
        for (si, sh) in shs.iter().enumerate() {
            // Slot p carries label sh(p); acting by s_q exchanges labels q and q+1.
            let inv = sh.inverse();
            let (pa, pb) = (inv.apply(q), inv.apply(q + 1));
            let (ba, bb) = (block_of(pa), block_of(pb));
            if ba == bb {
                // Adjacent slots inside one block: swap back through the factor's own action.
                let local = pa.min(pb) - offsets[ba];
                let g = &reps[ba].gens[local];
                for t in &tuples {
                    let col = tindex(t) * shs.len() + si;
                    for (row, v) in g.transpose().row(t[ba]).iter().map(|(c, v)| (*c, v.clone())).collect::<Vec<_>>() {
                        let mut u = t.clone();
                        u[ba] = row;
                        entries.push((tindex(&u) * shs.len() + si, col, v));
                    }
                }
            } else {
                let mut images = sh.images().to_vec();
                images[pa] = q + 1;
                images[pb] = q;
                let target = sh_index[&Permutation { images }];
                for t in &tuples {
                    let idx = tindex(t);
                    entries.push((idx * shs.len() + target, idx * shs.len() + si, F::one()));
                }
            }
        }
        gens.push(SparseMatrix::from_triplets(tdim * shs.len(), tdim * shs.len(), entries));
    }
    let rep = SigmaRep { n: r, degrees, gens };
    Ok(Induced { rep, blocks, shuffles: shs })
}

/// Day-convolution tensor product `(M ⊗ N)(n) = ⊕_{p+q=n} Ind(M(p) ⊗ N(q))`.
pub fn sigma_tensor<F: Scalar>(m: &BTreeMap<usize, SigmaRep<F>>, nn: &BTreeMap<usize, SigmaRep<F>>, n: usize) -> SigmaRep<F> {
    let mut summands = Vec::new();
    for p in 0..=n {
        if let (Some(a), Some(b)) = (m.get(&p), nn.get(&(n - p))) {
            if a.dim() > 0 && b.dim() > 0 {
                summands.push(induce(&[a.clone(), b.clone()], n).expect("arity sum").rep);
            }
        }
    }
    direct_sum(n, &summands)
}

pub fn direct_sum<F: Scalar>(n: usize, reps: &[SigmaRep<F>]) -> SigmaRep<F> {
    let mut out = SigmaRep::zero(n);
    for r in reps {
        out.degrees.extend(r.degrees.iter().copied());
        out.gens = out.gens.iter().zip(&r.gens).map(|(a, b)| a.block_diag(b)).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fp, Rational};

    type Q = Rational;

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(&[3]), vec![Permutation::identity(3)]);
        assert_eq!(shuffles(&[1, 1]).len(), 2);
        assert_eq!(shuffles(&[2, 1]).len(), 3);
        assert_eq!(shuffles(&[2, 2, 1]).len(), 30);
        assert_eq!(shuffles(&[0, 2]).len(), 1);
    }

    #[test]
    fn shuffles_increase_on_blocks() {
        for s in shuffles(&[2, 1]) {
            assert!(s.apply(0) < s.apply(1));
        }
        let s = shuffles(&[2, 1]);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn coinvariant_examples() {
        assert_eq!(SigmaRep::<Q>::trivial(2, 0).coinvariants().unwrap().dim(), 1);
        assert_eq!(SigmaRep::<Q>::sign(2, 0).coinvariants().unwrap().dim(), 0);
        assert_eq!(SigmaRep::<Q>::regular(2, 0).coinvariants().unwrap().dim(), 1);
        assert_eq!(SigmaRep::<Q>::regular(3, 0).coinvariants().unwrap().dim(), 1);
    }

    #[test]
    fn coinvariants_reject_small_characteristic() {
        assert!(SigmaRep::<Fp<3>>::trivial(3, 0).coinvariants().is_err());
        assert!(SigmaRep::<Fp<5>>::trivial(3, 0).coinvariants().is_ok());
    }

    #[test]
    fn induce_examples() {
        let t1 = SigmaRep::<Q>::trivial(1, 0);
        let t2 = SigmaRep::<Q>::trivial(2, 0);
        assert_eq!(induce(&[t1.clone(), t1.clone()], 2).unwrap().rep.dim(), 2);
        let i = induce(&[t2.clone(), t1.clone()], 3).unwrap();
        assert_eq!(i.rep.dim(), 3);
        i.rep.validate().unwrap();
        let same = induce(&[SigmaRep::<Q>::regular(3, 0)], 3).unwrap();
        assert_eq!(same.rep, SigmaRep::regular(3, 0));
        assert!(induce(&[t2], 3).is_err());
    }

    #[test]
    fn induced_from_regular_is_valid() {
        let r2 = SigmaRep::<Q>::regular(2, 0);
        let s1 = SigmaRep::<Q>::sign(1, 1);
        let i = induce(&[r2, s1.clone(), s1], 4).unwrap();
        i.rep.validate().unwrap();
        assert_eq!(i.rep.dim(), 2 * 12);
    }

    #[test]
    fn unit_tensor_unit_is_two_dimensional() {
        let unit: BTreeMap<usize, SigmaRep<Q>> = [(1, SigmaRep::trivial(1, 0))].into();
        assert_eq!(sigma_tensor(&unit, &unit, 2).dim(), 2);
    }

    #[test]
    fn act_is_right_action() {
        let rep = SigmaRep::<Q>::regular(3, 0);
        for a in Permutation::all(3) {
            for b in Permutation::all(3) {
                assert_eq!(rep.act(&a.compose(&b)), rep.act(&b).mul(&rep.act(&a)));
            }
        }
    }

    #[test]
    fn projection_is_invariant() {
        let rep = SigmaRep::<Q>::regular(3, 0);
        let c = rep.coinvariants().unwrap();
        for p in Permutation::all(3) {
            assert_eq!(c.projection.mul(&rep.act(&p)), c.projection);
        }
    }

    #[test]
    fn koszul_sign_of_swap() {
        assert!(koszul_sign(&[1, 1], &[1, 0]));
        assert!(!koszul_sign(&[1, 2], &[1, 0]));
        assert!(!koszul_sign(&[1, 1, 1], &[0, 1, 2]));
    }
}
