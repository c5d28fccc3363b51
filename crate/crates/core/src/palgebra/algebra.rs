use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::{accumulate, svec_from_map, SVec, Scalar, SparseMatrix};
use crate::operad_core::tree::Tree;
use crate::operad_core::{classical_operad, classical_presentation, tree_name, ClassicalOperad};
use crate::Error;

/// Algebra over Com, Asc or Lie given by structure constants of the single binary operation
/// (product, product, bracket). Column `i·dim + j` of `product` is the value on `(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PAlgebra<F: Scalar> {
    pub kind: ClassicalOperad,
    pub names: Vec<String>,
    /// Internal weight grading; structure constants must be additive in it.
    pub weights: Vec<i64>,
    pub product: SparseMatrix<F>,
}

/// A relation of the operad that does not vanish on the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub arity: usize,
    pub description: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity {}: {}", self.arity, self.description)
    }
}

impl<F: Scalar> PAlgebra<F> {
    pub fn new(kind: ClassicalOperad, names: Vec<String>, weights: Vec<i64>, product: SparseMatrix<F>) -> Result<Self, Error> {
        let n = names.len();
        if weights.len() != n {
            return Err(Error::Shape(format!("{} weights for {} basis elements", weights.len(), n)));
        }
        if product.shape() != (n, n * n) {
            return Err(Error::Shape(format!("product has shape {:?}, expected {:?}", product.shape(), (n, n * n))));
        }
        Ok(PAlgebra { kind, names, weights, product })
    }

    /// Builds from entries `(i, j, value)` meaning `μ(e_i, e_j) = value`. For Lie and Com the
    /// opposite entry is filled in by (anti)symmetry when it is not given.
    pub fn from_table(
        kind: ClassicalOperad,
        names: Vec<String>,
        weights: Vec<i64>,
        table: &[(usize, usize, SVec<F>)],
    ) -> Result<Self, Error> {
        let n = names.len();
        let mut cols: BTreeMap<(usize, usize), SVec<F>> = BTreeMap::new();
        for (i, j, v) in table {
            if *i >= n || *j >= n || v.iter().any(|(k, _)| *k >= n) {
                return Err(Error::Shape(format!("product entry ({}, {}) out of range", i, j)));
            }
            cols.insert((*i, *j), v.clone());
        }
        let given: Vec<(usize, usize)> = cols.keys().copied().collect();
        for (i, j) in given {
            if i == j || cols.contains_key(&(j, i)) {
                continue;
            }
            let v = cols[&(i, j)].clone();
            let mirrored = match kind {
                ClassicalOperad::Com => v,
                ClassicalOperad::Lie => v.into_iter().map(|(k, x)| (k, -x)).collect(),
                ClassicalOperad::Asc => continue,
            };
            cols.insert((j, i), mirrored);
        }
        let entries = cols.into_iter().flat_map(|((i, j), v)| v.into_iter().map(move |(k, x)| (k, i * n + j, x)));
        Self::new(kind, names, weights, SparseMatrix::from_triplets(n, n * n, entries))
    }

    pub fn zero(kind: ClassicalOperad, names: Vec<String>, weights: Vec<i64>) -> Self {
        let n = names.len();
        PAlgebra { kind, names, weights, product: SparseMatrix::zero(n, n * n) }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// `μ(e_i, e_j)`.
    pub fn mul(&self, i: usize, j: usize) -> SVec<F> {
        let n = self.dim();
        self.product.apply(&[(i * n + j, F::one())])
    }

    pub fn mul_vec(&self, a: &[(usize, F)], b: &[(usize, F)]) -> SVec<F> {
        let n = self.dim();
        let mut acc = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                let c = x.clone() * y.clone();
                accumulate(&mut acc, &c, &self.product.apply(&[(i * n + j, F::one())]));
            }
        }
        svec_from_map(acc)
    }

    /// Same algebra in the basis given by the columns of `change` (new basis vector `j` is
    /// column `j`), with new weights.
    pub fn change_basis(&self, change: &SparseMatrix<F>, weights: Vec<i64>) -> Result<Self, Error> {
        let n = self.dim();
        if change.shape() != (n, n) {
            return Err(Error::Shape("basis change must be square".into()));
        }
        if change.rank() != n {
            return Err(Error::Invalid("basis change is not invertible".into()));
        }
        let cols = change.columns();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = self.mul_vec(&cols[i], &cols[j]);
                out.push(change.solve(&v).expect("invertible"));
            }
        }
        Self::new(self.kind, self.names.clone(), weights, SparseMatrix::from_columns(n, &out))
    }

    /// Subalgebra spanned by the listed basis vectors, with its inclusion.
    pub fn subalgebra(&self, basis: &[usize]) -> Result<(PAlgebra<F>, AlgebraMorphism<F>), Error> {
        let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut table = Vec::new();
        for (p, &i) in basis.iter().enumerate() {
            for (q, &j) in basis.iter().enumerate() {
                let v = self.mul(i, j);
                let mut w = Vec::new();
                for (k, x) in v {
                    match pos.get(&k) {
                        Some(&r) => w.push((r, x)),
                        None => {
                            return Err(Error::Invalid(format!(
                                "span is not closed: product of {} and {} leaves it",
                                self.names[i], self.names[j]
                            )))
                        }
                    }
                }
                table.push((p, q, svec_from_map(w.into_iter().collect())));
            }
        }
        let names = basis.iter().map(|&i| self.names[i].clone()).collect();
        let weights = basis.iter().map(|&i| self.weights[i]).collect();
        let sub = PAlgebra::from_table(self.kind, names, weights, &table)?;
        let map = SparseMatrix::from_triplets(self.dim(), basis.len(), basis.iter().enumerate().map(|(p, &i)| (i, p, F::one())));
        let f = AlgebraMorphism::new(sub.clone(), self.clone(), map)?;
        Ok((sub, f))
    }

    /// Value of the binary generator `g` of the classical presentation on `(a, b)`.
    pub(crate) fn generator(&self, g: usize, a: &[(usize, F)], b: &[(usize, F)]) -> SVec<F> {
        if g == 1 {
            self.mul_vec(b, a)
        } else {
            self.mul_vec(a, b)
        }
    }

    fn evaluate(&self, t: &Tree, args: &[usize]) -> SVec<F> {
        match t {
            Tree::Leaf(l) => vec![(args[*l], F::one())],
            Tree::Node { decoration, children, .. } => {
                let a = self.evaluate(&children[0], args);
                let b = self.evaluate(&children[1], args);
                self.generator(*decoration, &a, &b)
            }
        }
    }
}

/// Lists the relations of the operad that fail on `a`: equivariance of the generator in arity 2,
/// weight additivity, and the Σ₃-closed arity-3 relations.
pub fn validate_algebra<F: Scalar>(a: &PAlgebra<F>) -> Vec<Violation> {
    let n = a.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = a.mul(i, j);
            if let Some((k, _)) = v.iter().find(|(k, _)| a.weights[*k] != a.weights[i] + a.weights[j]) {
                out.push(Violation {
                    arity: 2,
                    description: format!(
                        "weight of {} is not the sum of the weights of {} and {}",
                        a.names[*k], a.names[i], a.names[j]
                    ),
                });
            }
            let w = a.mul(j, i);
            let bad = match a.kind {
                ClassicalOperad::Com => v != w,
                ClassicalOperad::Lie => v != w.iter().map(|(k, x)| (*k, -x.clone())).collect::<SVec<F>>(),
                ClassicalOperad::Asc => false,
            };
            if bad && i <= j {
                let what = if a.kind == ClassicalOperad::Com { "symmetric" } else { "antisymmetric" };
                out.push(Violation {
                    arity: 2,
                    description: format!("operation is not {} on ({}, {})", what, a.names[i], a.names[j]),
                });
            }
        }
    }
    if n == 0 {
        return out;
    }
    let q = classical_operad::<F>(a.kind, 3).expect("classical operads are defined to arity 3");
    let gens = classical_presentation::<F>(a.kind).generators;
    for row in q.ideal[3].rows() {
        let rel = q.bases[3].to_treevec(row);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let args = [x, y, z];
                    let mut acc = BTreeMap::new();
                    for (t, c) in &rel {
                        accumulate(&mut acc, c, &a.evaluate(t, &args));
                    }
                    if !acc.values().all(|v: &F| v.is_zero()) {
                        let expr: Vec<String> = rel.iter().map(|(t, c)| format!("{}·{}", c, tree_name(t, &gens))).collect();
                        out.push(Violation {
                            arity: 3,
                            description: format!(
                                "{} fails on ({}, {}, {})",
                                expr.join(" + "),
                                a.names[x],
                                a.names[y],
                                a.names[z]
                            ),
                        });
                        return out;
                    }
                }
            }
        }
    }
    out
}

pub fn check_algebra<F: Scalar>(a: &PAlgebra<F>) -> Result<(), Error> {
    match validate_algebra(a).first() {
        None => Ok(()),
        Some(v) => Err(Error::Invalid(format!("not a {}-algebra: {}", a.kind, v))),
    }
}

/// Pulls `a` back along `Com → Asc → Lie`: an Asc-algebra becomes a Lie algebra with the
/// commutator bracket, a Com-algebra is in particular associative.
pub fn restrict_along_operad_morphism<F: Scalar>(a: &PAlgebra<F>, target: ClassicalOperad) -> Result<PAlgebra<F>, Error> {
    use ClassicalOperad::*;
    match (a.kind, target) {
        (x, y) if x == y => Ok(a.clone()),
        (Com, Asc) => Ok(PAlgebra { kind: Asc, ..a.clone() }),
        (Com, Lie) | (Asc, Lie) => {
            let n = a.dim();
            let mut cols = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc: BTreeMap<usize, F> = a.mul(i, j).into_iter().collect();
                    accumulate(&mut acc, &-F::one(), &a.mul(j, i));
                    cols.push(svec_from_map(acc));
                }
            }
            PAlgebra::new(Lie, a.names.clone(), a.weights.clone(), SparseMatrix::from_columns(n, &cols))
        }
        (x, y) => Err(Error::Invalid(format!("no operad morphism {} → {} among the classical operads", y, x))),
    }
}

/// Weight-preserving linear map commuting with the structure constants.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism<F: Scalar> {
    pub source: PAlgebra<F>,
    pub target: PAlgebra<F>,
    /// `target.dim() × source.dim()`.
    pub map: SparseMatrix<F>,
}

impl<F: Scalar> AlgebraMorphism<F> {
    pub fn new(source: PAlgebra<F>, target: PAlgebra<F>, map: SparseMatrix<F>) -> Result<Self, Error> {
        if source.kind != target.kind {
            return Err(Error::Invalid(format!("morphism between a {}- and a {}-algebra", source.kind, target.kind)));
        }
        if map.shape() != (target.dim(), source.dim()) {
            return Err(Error::Shape(format!("morphism matrix has shape {:?}", map.shape())));
        }
        for (r, c, _) in map.entries() {
            if target.weights[r] != source.weights[c] {
                return Err(Error::Invalid(format!(
                    "{} ↦ {} does not preserve weight",
                    source.names[c], target.names[r]
                )));
            }
        }
        let cols = map.columns();
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let lhs = map.apply(&source.mul(i, j));
                let rhs = target.mul_vec(&cols[i], &cols[j]);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "map is not multiplicative on ({}, {})",
                        source.names[i], source.names[j]
                    )));
                }
            }
        }
        Ok(AlgebraMorphism { source, target, map })
    }

    pub fn identity(a: &PAlgebra<F>) -> Self {
        AlgebraMorphism { source: a.clone(), target: a.clone(), map: SparseMatrix::identity(a.dim()) }
    }

    /// `0 → a`.
    pub fn from_zero(a: &PAlgebra<F>) -> Self {
        let zero = PAlgebra::zero(a.kind, Vec::new(), Vec::new());
        AlgebraMorphism { source: zero, target: a.clone(), map: SparseMatrix::zero(a.dim(), 0) }
    }

    pub fn is_injective(&self) -> bool {
        self.map.rank() == self.source.dim()
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn int<F: Scalar>(v: &[(usize, i64)]) -> SVec<F> {
    v.iter().map(|(k, x)| (*k, F::from_i64(*x))).collect()
}

/// `sl₂` with basis `e, h, f`, weights `2, 0, −2` (the `h`-eigenvalues).
pub fn sl2<F: Scalar>() -> PAlgebra<F> {
    let table = vec![
        (1, 0, int(&[(0, 2)])),
        (1, 2, int(&[(2, -2)])),
        (0, 2, int(&[(1, 1)])),
    ];
    PAlgebra::from_table(ClassicalOperad::Lie, names(&["e", "h", "f"]), vec![2, 0, -2], &table).expect("sl2 table")
}

/// Abelian Lie algebra with the given weights, basis `x0, x1, …`.
pub fn abelian_lie<F: Scalar>(weights: Vec<i64>) -> PAlgebra<F> {
    let names = (0..weights.len()).map(|i| format!("x{}", i)).collect();
    PAlgebra::zero(ClassicalOperad::Lie, names, weights)
}

/// Two-dimensional non-abelian Lie algebra `[x, y] = y`.
pub fn affine_line_lie<F: Scalar>() -> PAlgebra<F> {
    PAlgebra::from_table(ClassicalOperad::Lie, names(&["x", "y"]), vec![0, 0], &[(0, 1, int(&[(1, 1)]))]).expect("table")
}

/// `n × n` matrices as an Asc-algebra, basis `E_ij` at index `i·n + j`, weight 0.
pub fn matrix_algebra<F: Scalar>(n: usize) -> PAlgebra<F> {
    let mut table = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table.push((i * n + j, j * n + l, vec![(i * n + l, F::one())]));
            }
        }
    }
    let names = (0..n * n).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
    PAlgebra::from_table(ClassicalOperad::Asc, names, vec![0; n * n], &table).expect("matrix table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Q = Rational;

    #[test]
    fn sl2_is_valid() {
        assert!(validate_algebra(&sl2::<Q>()).is_empty());
        assert!(validate_algebra(&sl2::<crate::F7>()).is_empty());
    }

    #[test]
    fn zero_product_valid_everywhere() {
        for kind in ClassicalOperad::ALL {
            let a = PAlgebra::<Q>::zero(kind, names(&["x", "y"]), vec![0, 0]);
            assert!(validate_algebra(&a).is_empty(), "{}", kind);
        }
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // [x,y] = y, [y,z] = x: the Jacobiator on (x,y,z) is −x.
        let table = vec![(0, 1, int(&[(1, 1)])), (1, 2, int(&[(0, 1)]))];
        let a = PAlgebra::<Q>::from_table(ClassicalOperad::Lie, names(&["x", "y", "z"]), vec![0; 3], &table).unwrap();
        let v = validate_algebra(&a);
        assert!(v.iter().any(|v| v.arity == 3), "{:?}", v);
    }

    #[test]
    fn nilpotent_square_bracket_jacobi() {
        // b(x,x) = y is not antisymmetric; its antisymmetrization is zero and valid.
        let a = PAlgebra::<Q>::new(
            ClassicalOperad::Lie,
            names(&["x", "y"]),
            vec![0, 0],
            SparseMatrix::from_triplets(2, 4, vec![(1, 0, Q::from_i64(1))]),
        )
        .unwrap();
        assert!(validate_algebra(&a).iter().any(|v| v.arity == 2));
        let anti = restrict_along_operad_morphism(&PAlgebra { kind: ClassicalOperad::Asc, ..a }, ClassicalOperad::Lie).unwrap();
        assert!(validate_algebra(&anti).is_empty());
    }

    #[test]
    fn asc_violation_and_weights() {
        // x·x = y, y·x = x: not associative.
        let table = vec![(0, 0, int(&[(1, 1)])), (1, 0, int(&[(0, 1)]))];
        let a = PAlgebra::<Q>::from_table(ClassicalOperad::Asc, names(&["x", "y"]), vec![0, 0], &table).unwrap();
        assert!(validate_algebra(&a).iter().any(|v| v.arity == 3));
        let b = PAlgebra::<Q>::from_table(ClassicalOperad::Com, names(&["x", "y"]), vec![1, 1], &[(0, 0, int(&[(1, 1)]))]).unwrap();
        assert!(validate_algebra(&b).iter().any(|v| v.description.contains("weight")));
    }

    #[test]
    fn matrices_give_gl2() {
        let m = matrix_algebra::<Q>(2);
        assert!(validate_algebra(&m).is_empty());
        let gl = restrict_along_operad_morphism(&m, ClassicalOperad::Lie).unwrap();
        assert!(validate_algebra(&gl).is_empty());
        // [E12, E21] = E11 − E22
        assert_eq!(gl.mul(1, 2), int(&[(0, 1), (3, -1)]));
        // [E11, E12] = E12
        assert_eq!(gl.mul(0, 1), int(&[(1, 1)]));
    }

    #[test]
    fn commutative_restricts_to_abelian() {
        let a = PAlgebra::<Q>::from_table(ClassicalOperad::Com, names(&["x", "y"]), vec![1, 2], &[(0, 0, int(&[(1, 1)]))]).unwrap();
        assert!(validate_algebra(&a).is_empty());
        let asc = restrict_along_operad_morphism(&a, ClassicalOperad::Asc).unwrap();
        assert!(validate_algebra(&asc).is_empty());
        let lie = restrict_along_operad_morphism(&asc, ClassicalOperad::Lie).unwrap();
        assert!(lie.product.is_zero());
        assert!(restrict_along_operad_morphism(&lie, ClassicalOperad::Com).is_err());
    }

    #[test]
    fn borel_inclusion() {
        let g = sl2::<Q>();
        let (b, f) = g.subalgebra(&[1, 2]).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(f.is_injective());
        assert!(g.subalgebra(&[0, 2]).is_err());
        let bad = SparseMatrix::from_triplets(3, 2, vec![(0, 0, Q::from_i64(1))]);
        assert!(AlgebraMorphism::new(b, g, bad).is_err());
    }

    #[test]
    fn basis_change_preserves_validity() {
        let g = sl2::<Q>();
        let p = SparseMatrix::<Q>::from_i64(&[vec![1, 1, 0], vec![0, 1, 2], vec![1, 0, 1]]);
        let h = g.change_basis(&p, vec![0; 3]).unwrap();
        assert!(validate_algebra(&PAlgebra { weights: vec![0; 3], ..h }).is_empty());
        let singular = SparseMatrix::<Q>::from_i64(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert!(g.change_basis(&singular, vec![0; 3]).is_err());
    }
}
