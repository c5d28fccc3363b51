use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::exactalg::{accumulate, svec_from_map, SVec, Scalar, SparseMatrix};
use crate::operad_core::ClassicalOperad;
use crate::Error;

use super::algebra::{check_algebra, PAlgebra};

/// Linear combination of PBW monomials (nondecreasing index sequences).
pub type Poly<F> = BTreeMap<Vec<usize>, F>;

fn add_poly<F: Scalar>(acc: &mut Poly<F>, c: &F, p: &Poly<F>) {
    for (m, x) in p {
        let v = c.clone() * x.clone();
        let e = acc.entry(m.clone()).or_insert_with(F::zero);
        *e += v;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

/// Universal enveloping algebra of a Lie algebra in the PBW basis of its ordered basis.
/// Products are straightened with `x_j x_i = x_i x_j + [x_j, x_i]` for `i < j`.
#[derive(Debug)]
pub struct Pbw<F: Scalar> {
    lie: PAlgebra<F>,
    memo: Mutex<HashMap<(usize, Vec<usize>), Poly<F>>>,
}

impl<F: Scalar> Clone for Pbw<F> {
    fn clone(&self) -> Self {
        Pbw { lie: self.lie.clone(), memo: Mutex::new(self.memo.lock().expect("memo").clone()) }
    }
}

impl<F: Scalar> Pbw<F> {
    pub fn new(lie: &PAlgebra<F>) -> Result<Self, Error> {
        if lie.kind != ClassicalOperad::Lie {
            return Err(Error::Invalid(format!("PBW basis needs a Lie algebra, got {}", lie.kind)));
        }
        check_algebra(lie)?;
        Ok(Pbw { lie: lie.clone(), memo: Mutex::new(HashMap::new()) })
    }

    pub fn lie(&self) -> &PAlgebra<F> {
        &self.lie
    }

    pub fn weight(&self, m: &[usize]) -> i64 {
        m.iter().map(|&i| self.lie.weights[i]).sum()
    }

    pub fn name(&self, m: &[usize]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut k = 0;
        while k < m.len() {
            let mut e = 1;
            while k + e < m.len() && m[k + e] == m[k] {
                e += 1;
            }
            let n = &self.lie.names[m[k]];
            parts.push(if e == 1 { n.clone() } else { format!("{}^{}", n, e) });
            k += e;
        }
        parts.join("·")
    }

    /// `x_j · m` in normal form.
    pub fn generator_times(&self, j: usize, m: &[usize]) -> Poly<F> {
        if m.first().map_or(true, |&i| j <= i) {
            let mut v = Vec::with_capacity(m.len() + 1);
            v.push(j);
            v.extend_from_slice(m);
            return [(v, F::one())].into();
        }
        let key = (j, m.to_vec());
        if let Some(p) = self.memo.lock().expect("memo").get(&key) {
            return p.clone();
        }
        let i = m[0];
        let rest = &m[1..];
        let mut out = Poly::new();
        for (mono, c) in self.generator_times(j, rest) {
            add_poly(&mut out, &c, &self.generator_times(i, &mono));
        }
        for (k, c) in self.lie.mul(j, i) {
            add_poly(&mut out, &c, &self.generator_times(k, rest));
        }
        self.memo.lock().expect("memo").insert(key, out.clone());
        out
    }

    pub fn mul(&self, a: &[usize], b: &[usize]) -> Poly<F> {
        let mut cur: Poly<F> = [(b.to_vec(), F::one())].into();
        for &j in a.iter().rev() {
            let mut next = Poly::new();
            for (m, c) in &cur {
                add_poly(&mut next, c, &self.generator_times(j, m));
            }
            cur = next;
        }
        cur
    }

    pub fn mul_poly(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        let mut out = Poly::new();
        for (m, x) in a {
            for (n, y) in b {
                add_poly(&mut out, &(x.clone() * y.clone()), &self.mul(m, n));
            }
        }
        out
    }
}

/// All nondecreasing sequences over `0..dim` of length at most `max_len`, by length then lexicographically.
pub fn pbw_monomials(dim: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for i in start..dim {
                let mut v: Vec<usize> = m.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Unital associative algebra with a multiplication table that may be known only for pairs whose
/// filtration degrees add up to at most `bound`.
#[derive(Clone, Debug)]
pub struct TruncatedAssocAlgebra<F: Scalar> {
    pub names: Vec<String>,
    pub weights: Vec<i64>,
    pub filtration: Vec<usize>,
    /// `None` when the algebra is finite and the table complete.
    pub bound: Option<usize>,
    pub unit: usize,
    table: Vec<Option<SVec<F>>>,
}

impl<F: Scalar> TruncatedAssocAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> Option<&SVec<F>> {
        self.table[i * self.dim() + j].as_ref()
    }

    pub fn mul_vec(&self, a: &[(usize, F)], b: &[(usize, F)]) -> Option<SVec<F>> {
        let mut acc = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                accumulate(&mut acc, &(x.clone() * y.clone()), self.mul(*i, *j)?);
            }
        }
        Some(svec_from_map(acc))
    }

    /// Unit laws everywhere and associativity on every triple whose products are in the table.
    pub fn check_axioms(&self) -> Result<(), Error> {
        let n = self.dim();
        let e = |i: usize| vec![(i, F::one())];
        for i in 0..n {
            if self.mul(self.unit, i) != Some(&e(i)) || self.mul(i, self.unit) != Some(&e(i)) {
                return Err(Error::Invalid(format!("unit law fails at {}", self.names[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let Some(ij) = self.mul(i, j) else { continue };
                for k in 0..n {
                    let Some(jk) = self.mul(j, k) else { continue };
                    let (Some(l), Some(r)) = (self.mul_vec(ij, &e(k)), self.mul_vec(&e(i), jk)) else { continue };
                    if l != r {
                        return Err(Error::Invalid(format!(
                            "associativity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of basis elements per filtration degree.
    pub fn filtration_dims(&self) -> Vec<usize> {
        let top = self.filtration.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for &d in &self.filtration {
            out[d] += 1;
        }
        out
    }
}

/// Enveloping algebra together with the images of its generators: the basis of `A` for Com and
/// Lie, the left copies `a⊗1` followed by the right copies `1⊗a` for Asc.
#[derive(Clone, Debug)]
pub struct Enveloping<F: Scalar> {
    pub kind: ClassicalOperad,
    pub algebra: TruncatedAssocAlgebra<F>,
    pub generators: Vec<SVec<F>>,
    /// PBW data and monomial list for Lie algebras.
    pub pbw: Option<(Pbw<F>, Vec<Vec<usize>>)>,
}

impl<F: Scalar> Enveloping<F> {
    /// Left multiplication by generator `g` on basis element `u`, dropping terms beyond the bound.
    pub fn generator_times(&self, g: usize, u: usize) -> SVec<F> {
        match &self.pbw {
            Some((pbw, monos)) => {
                let bound = self.algebra.bound.unwrap_or(usize::MAX);
                let index: HashMap<&Vec<usize>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let p = pbw.generator_times(g, &monos[u]);
                svec_from_map(p.iter().filter(|(m, _)| m.len() <= bound).map(|(m, c)| (index[m], c.clone())).collect())
            }
            None => self.algebra.mul_vec(&self.generators[g], &[(u, F::one())]).expect("finite table"),
        }
    }

    /// Number of generators of `U` used for module actions.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }
}

/// `U(A)`: `A₊` for Com, `A₊ ⊗ A₊^op` for Asc, PBW monomials of length at most `bound` for Lie.
pub fn enveloping_algebra<F: Scalar>(a: &PAlgebra<F>, bound: usize) -> Result<Enveloping<F>, Error> {
    check_algebra(a)?;
    let n = a.dim();
    // A₊ with the unit at index 0.
    let plus = |i: usize, j: usize| -> SVec<F> {
        match (i, j) {
            (0, _) => vec![(j, F::one())],
            (_, 0) => vec![(i, F::one())],
            _ => a.mul(i - 1, j - 1).into_iter().map(|(k, x)| (k + 1, x)).collect(),
        }
    };
    let plus_names: Vec<String> = std::iter::once("1".to_string()).chain(a.names.iter().cloned()).collect();
    let plus_weights: Vec<i64> = std::iter::once(0).chain(a.weights.iter().copied()).collect();
    match a.kind {
        ClassicalOperad::Com => {
            let m = n + 1;
            let table = (0..m * m).map(|k| Some(plus(k / m, k % m))).collect();
            let filtration = (0..m).map(|i| usize::from(i > 0)).collect();
            let algebra = TruncatedAssocAlgebra { names: plus_names, weights: plus_weights, filtration, bound: None, unit: 0, table };
            let generators = (0..n).map(|i| vec![(i + 1, F::one())]).collect();
            Ok(Enveloping { kind: a.kind, algebra, generators, pbw: None })
        }
        ClassicalOperad::Asc => {
            let m = n + 1;
            let idx = |p: usize, q: usize| p * m + q;
            let mut table = Vec::with_capacity(m.pow(4));
            for x in 0..m * m {
                for y in 0..m * m {
                    let (p, q, r, s) = (x / m, x % m, y / m, y % m);
                    // (p⊗q)(r⊗s) = pr ⊗ sq
                    let mut acc = BTreeMap::new();
                    for (u, c) in plus(p, r) {
                        for (v, d) in plus(s, q) {
                            accumulate(&mut acc, &(c.clone() * d), &[(idx(u, v), F::one())]);
                        }
                    }
                    table.push(Some(svec_from_map(acc)));
                }
            }
            let names = (0..m * m).map(|x| format!("{}⊗{}", plus_names[x / m], plus_names[x % m])).collect();
            let weights = (0..m * m).map(|x| plus_weights[x / m] + plus_weights[x % m]).collect();
            let filtration = (0..m * m).map(|x| usize::from(x / m > 0) + usize::from(x % m > 0)).collect();
            let algebra = TruncatedAssocAlgebra { names, weights, filtration, bound: None, unit: 0, table };
            let generators = (0..n)
                .map(|i| vec![(idx(i + 1, 0), F::one())])
                .chain((0..n).map(|i| vec![(idx(0, i + 1), F::one())]))
                .collect();
            Ok(Enveloping { kind: a.kind, algebra, generators, pbw: None })
        }
        ClassicalOperad::Lie => {
            let pbw = Pbw::new(a)?;
            let monos = pbw_monomials(n, bound);
            let index: HashMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let m = monos.len();
            let mut table = Vec::with_capacity(m * m);
            for x in &monos {
                for y in &monos {
                    if x.len() + y.len() <= bound {
                        let p = pbw.mul(x, y);
                        table.push(Some(svec_from_map(p.into_iter().map(|(k, c)| (index[&k], c)).collect())));
                    } else {
                        table.push(None);
                    }
                }
            }
            let algebra = TruncatedAssocAlgebra {
                names: monos.iter().map(|x| pbw.name(x)).collect(),
                weights: monos.iter().map(|x| pbw.weight(x)).collect(),
                filtration: monos.iter().map(|x| x.len()).collect(),
                bound: Some(bound),
                unit: 0,
                table,
            };
            let generators = (0..n).map(|i| vec![(index[&vec![i]], F::one())]).collect();
            Ok(Enveloping { kind: a.kind, algebra, generators, pbw: Some((pbw, monos)) })
        }
    }
}

/// Matrix of left multiplication by `u` on `U`, columns restricted to where the table is known.
pub fn left_multiplication<F: Scalar>(u: &TruncatedAssocAlgebra<F>, v: &[(usize, F)]) -> SparseMatrix<F> {
    let n = u.dim();
    let cols: Vec<SVec<F>> = (0..n).map(|j| u.mul_vec(v, &[(j, F::one())]).unwrap_or_default()).collect();
    SparseMatrix::from_columns(n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::palgebra::algebra::{abelian_lie, matrix_algebra, sl2};
    use crate::symcore::factorial;
    use crate::Rational;

    type Q = Rational;

    fn multiset(d: usize, k: usize) -> usize {
        if d == 0 {
            return usize::from(k == 0);
        }
        factorial(d + k - 1) / (factorial(k) * factorial(d - 1))
    }

    #[test]
    fn sl2_pbw_dims() {
        let u = enveloping_algebra(&sl2::<Q>(), 2).unwrap();
        assert_eq!(u.algebra.dim(), 10);
        assert_eq!(u.algebra.filtration_dims(), vec![1, 3, 6]);
        u.algebra.check_axioms().unwrap();
        let u4 = enveloping_algebra(&sl2::<Q>(), 4).unwrap();
        let dims = u4.algebra.filtration_dims();
        for (k, d) in dims.iter().enumerate() {
            assert_eq!(*d, multiset(3, k));
        }
        u4.algebra.check_axioms().unwrap();
    }

    #[test]
    fn straightening_of_fe() {
        let g = sl2::<Q>();
        let pbw = Pbw::new(&g).unwrap();
        // f·e = e·f − h
        let p = pbw.mul(&[2], &[0]);
        let expected: Poly<Q> = [(vec![0, 2], Q::from_i64(1)), (vec![1], Q::from_i64(-1))].into();
        assert_eq!(p, expected);
        // f·e² = e²f − 2eh + 2e... computed twice through different bracketings.
        let a = pbw.mul_poly(&pbw.mul(&[2], &[0]), &[(vec![0], Q::from_i64(1))].into());
        let b = pbw.mul(&[2], &[0, 0]);
        assert_eq!(a, b);
    }

    #[test]
    fn com_and_asc_dims() {
        for d in 0..4 {
            let a = abelian_lie::<Q>(vec![0; d]);
            let com = crate::palgebra::algebra::PAlgebra { kind: ClassicalOperad::Com, ..a.clone() };
            let u = enveloping_algebra(&com, 0).unwrap();
            assert_eq!(u.algebra.dim(), d + 1);
            u.algebra.check_axioms().unwrap();
            let asc = crate::palgebra::algebra::PAlgebra { kind: ClassicalOperad::Asc, ..a };
            let ue = enveloping_algebra(&asc, 0).unwrap();
            assert_eq!(ue.algebra.dim(), (d + 1) * (d + 1));
        }
        let m = enveloping_algebra(&matrix_algebra::<Q>(2), 0).unwrap();
        assert_eq!(m.algebra.dim(), 25);
        m.algebra.check_axioms().unwrap();
    }

    #[test]
    fn abelian_pbw_is_polynomial() {
        let u = enveloping_algebra(&abelian_lie::<Q>(vec![1, 1]), 3).unwrap();
        assert_eq!(u.algebra.filtration_dims(), vec![1, 2, 3, 4]);
        u.algebra.check_axioms().unwrap();
    }

    #[test]
    fn rejects_invalid() {
        let a = crate::palgebra::algebra::PAlgebra::<Q>::new(
            ClassicalOperad::Lie,
            vec!["x".into()],
            vec![0],
            SparseMatrix::from_triplets(1, 1, vec![(0, 0, Q::from_i64(1))]),
        )
        .unwrap();
        assert!(enveloping_algebra(&a, 2).is_err());
    }
}
