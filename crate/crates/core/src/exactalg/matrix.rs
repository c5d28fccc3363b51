use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SVec<F> = Vec<(usize, F)>;

pub fn svec_from_map<F: Scalar>(m: BTreeMap<usize, F>) -> SVec<F> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `acc += c * v` on a map-backed accumulator.
pub fn accumulate<F: Scalar>(acc: &mut BTreeMap<usize, F>, c: &F, v: &[(usize, F)]) {
    if c.is_zero() {
        return;
    }
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(F::zero);
        *e += c.clone() * x.clone();
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

pub fn svec_add<F: Scalar>(a: &[(usize, F)], c: &F, b: &[(usize, F)]) -> SVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.clone() + c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn svec_scale<F: Scalar>(c: &F, v: &[(usize, F)]) -> SVec<F> {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, c.clone() * x.clone())).collect()
}

/// Sparse matrix of a linear map `cols`-space → `rows`-space, stored by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix<F: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<SVec<F>>,
}

impl<F: Scalar> fmt::Debug for SparseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{}", self.rows, self.cols)?;
        for (r, row) in self.data.iter().enumerate() {
            if !row.is_empty() {
                writeln!(f, "  {}: {:?}", r, row)?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> SparseMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, F::one())]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Duplicate positions are summed; zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut maps: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({}, {}) out of range {}x{}", r, c, rows, cols);
            let e = maps[r].entry(c).or_insert_with(F::zero);
            *e += v;
        }
        let data = maps.into_iter().map(svec_from_map).collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_triplets(r, c, entries)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<F>> = rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_columns(rows: usize, columns: &[SVec<F>]) -> Self {
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v.clone())));
        Self::from_triplets(rows, columns.len(), entries)
    }

    pub fn from_rows(cols: usize, rows: Vec<SVec<F>>) -> Self {
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|(c, v)| *c < cols && !v.is_zero()));
        }
        SparseMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn row(&self, r: usize) -> &[(usize, F)] {
        &self.data[r]
    }
    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c.clone(), v)))
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SVec<F>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data: cols }
    }

    /// Columns as sparse vectors.
    pub fn columns(&self) -> Vec<SVec<F>> {
        self.transpose().data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product {:?} * {:?}", self.shape(), other.shape());
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BTreeMap::new();
                for (k, a) in row {
                    accumulate(&mut acc, a, &other.data[*k]);
                }
                svec_from_map(acc)
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-F::one(), other)
    }

    pub fn add_scaled(&self, c: &F, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| svec_add(a, c, b)).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        let data = self.data.iter().map(|r| svec_scale(c, r)).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix applied to a sparse column vector.
    pub fn apply(&self, v: &[(usize, F)]) -> SVec<F> {
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut s = F::zero();
            let (mut i, mut j) = (0, 0);
            while i < row.len() && j < v.len() {
                if row[i].0 < v[j].0 {
                    i += 1;
                } else if v[j].0 < row[i].0 {
                    j += 1;
                } else {
                    s += row[i].1.clone() * v[j].1.clone();
                    i += 1;
                    j += 1;
                }
            }
            if !s.is_zero() {
                out.push((r, s));
            }
        }
        out
    }

    /// Kronecker product; basis of the product is (i, j) ↦ i * dim2 + j.
    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, a) in self.entries() {
            for (r2, c2, b) in other.entries() {
                entries.push((r1 * other.rows + r2, c1 * other.cols + c2, a.clone() * b.clone()));
            }
        }
        Self::from_triplets(self.rows * other.rows, self.cols * other.cols, entries)
    }

    /// Stacks `[self; other]` vertically.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                r
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let top = self.hstack(&Self::zero(self.rows, other.cols));
        let bottom = Self::zero(other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    /// Restriction to a subset of rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows.iter().map(|&r| self.data[r].clone()).collect();
        SparseMatrix { rows: rows.len(), cols: self.cols, data }
    }

    /// Restriction to a subset of columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        self.transpose().select_rows(cols).transpose()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for row in &self.data {
            e.insert(row.clone());
        }
        e.rank()
    }

    /// Basis of the null space in reduced form, ordered by free column.
    pub fn kernel(&self) -> Vec<SVec<F>> {
        let rref = Rref::of_rows(self.cols, self.data.iter().cloned());
        rref.kernel_basis()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[(usize, F)]) -> Option<SVec<F>> {
        let aug = self.hstack(&Self::from_columns(self.rows, &[b.to_vec()]));
        let rref = Rref::of_rows(aug.cols, aug.data.into_iter());
        let mut x = Vec::new();
        for row in &rref.rows {
            let p = row[0].0;
            if p == self.cols {
                return None;
            }
            let rhs = row.iter().find(|(c, _)| *c == self.cols).map(|e| e.1.clone());
            if let Some(v) = rhs {
                x.push((p, v));
            }
        }
        x.sort_by_key(|e| e.0);
        Some(x)
    }
}

/// Incremental semi-echelon form: each stored row has leading coefficient 1 at a distinct pivot.
#[derive(Clone, Debug)]
pub struct Echelon<F: Scalar> {
    dim: usize,
    pivot_row: BTreeMap<usize, usize>,
    rows: Vec<SVec<F>>,
}

impl<F: Scalar> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, pivot_row: BTreeMap::new(), rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Reduces `v` against the stored rows; zero iff `v` lies in their span.
    pub fn reduce(&self, v: SVec<F>) -> SVec<F> {
        let mut acc: BTreeMap<usize, F> = v.into_iter().collect();
        let mut from = 0usize;
        loop {
            let next = acc
                .range(from..)
                .find(|(c, _)| self.pivot_row.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            match next {
                None => break,
                Some((c, x)) => {
                    let r = &self.rows[self.pivot_row[&c]];
                    accumulate(&mut acc, &-x, r);
                    from = c + 1;
                }
            }
        }
        svec_from_map(acc)
    }

    pub fn contains(&self, v: &[(usize, F)]) -> bool {
        self.reduce(v.to_vec()).is_empty()
    }

    /// Adds `v` to the span; returns its new pivot if it was independent.
    pub fn insert(&mut self, v: SVec<F>) -> Option<usize> {
        let r = self.reduce(v);
        if r.is_empty() {
            return None;
        }
        let lead = r[0].1.inv().expect("nonzero leading entry");
        let r = svec_scale(&lead, &r);
        let p = r[0].0;
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r);
        Some(p)
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<F: Scalar> {
    pub dim: usize,
    /// Rows sorted by pivot; each row has a 1 at its pivot and zeros in all other pivot columns.
    pub rows: Vec<SVec<F>>,
}

impl<F: Scalar> Rref<F> {
    pub fn of_rows(dim: usize, rows: impl Iterator<Item = SVec<F>>) -> Self {
        let mut e = Echelon::new(dim);
        for r in rows {
            e.insert(r);
        }
        Self::from_echelon(e)
    }

    pub fn from_echelon(e: Echelon<F>) -> Self {
        let mut order: Vec<(usize, usize)> = e.pivot_row.iter().map(|(p, r)| (*p, *r)).collect();
        order.sort();
        let pivots: Vec<usize> = order.iter().map(|x| x.0).collect();
        let mut done: BTreeMap<usize, SVec<F>> = BTreeMap::new();
        for &(p, r) in order.iter().rev() {
            let mut acc: BTreeMap<usize, F> = e.rows[r].iter().cloned().collect();
            for q in pivots.iter().filter(|&&q| q > p) {
                if let Some(x) = acc.get(q).cloned() {
                    accumulate(&mut acc, &-x, &done[q]);
                }
            }
            done.insert(p, svec_from_map(acc));
        }
        Rref { dim: e.dim, rows: done.into_values().collect() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn kernel_basis(&self) -> Vec<SVec<F>> {
        let pivots = self.pivots();
        let is_pivot: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for f in (0..self.dim).filter(|c| !is_pivot.contains(c)) {
            let mut v: BTreeMap<usize, F> = BTreeMap::new();
            v.insert(f, F::one());
            for row in &self.rows {
                if let Ok(k) = row.binary_search_by_key(&f, |e| e.0) {
                    v.insert(row[0].0, -row[k].1.clone());
                }
            }
            out.push(svec_from_map(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type M = SparseMatrix<Rational>;

    #[test]
    fn rank_examples() {
        assert_eq!(M::zero(3, 3).rank(), 0);
        assert_eq!(M::identity(4).rank(), 4);
        assert_eq!(M::from_i64(&[vec![1, 1], vec![1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = M::from_i64(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn solve_roundtrip() {
        let m = M::from_i64(&[vec![1, 2], vec![3, 4], vec![5, 6]]);
        let b = m.apply(&[(0, Rational::from_i64(2)), (1, Rational::from_i64(-1))]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(m.solve(&[(0, Rational::from_i64(1))]).is_none());
    }

    #[test]
    fn kron_shape() {
        let a = M::from_i64(&[vec![0, 1], vec![1, 0]]);
        let k = a.kron(&M::identity(3));
        assert_eq!(k.shape(), (6, 6));
        assert_eq!(k.mul(&k), M::identity(6));
    }

    #[test]
    fn duplicates_summed_and_zeros_dropped() {
        let m = M::from_triplets(2, 2, vec![(0, 0, Rational::from_i64(1)), (0, 0, Rational::from_i64(-1)), (1, 1, Rational::from_i64(2))]);
        assert_eq!(m.nnz(), 1);
    }
}
