use std::collections::BTreeMap;

use super::matrix::{Echelon, SVec, SparseMatrix};
use super::scalar::Scalar;
use crate::Error;

/// Integer-graded vector space given by basis labels per degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    pub components: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dims(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let components = dims
            .into_iter()
            .filter(|(_, d)| *d > 0)
            .map(|(deg, d)| (deg, (0..d).map(|i| format!("e{}_{}", deg, i)).collect()))
            .collect();
        GradedSpace { components }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.components.get(&degree).map_or(0, |c| c.len())
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(|c| c.len()).sum()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.components.iter().map(|(d, c)| (*d, c.len())).filter(|x| x.1 > 0).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(|(d, c)| if d.rem_euclid(2) == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `d` lowers degree by one.
    Chain,
    /// `d` raises degree by one.
    Cochain,
}

impl Direction {
    pub fn step(self) -> i64 {
        match self {
            Direction::Chain => -1,
            Direction::Cochain => 1,
        }
    }
}

/// Finite complex with `d ∘ d = 0` verified on construction.
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Scalar> {
    direction: Direction,
    dims: BTreeMap<i64, usize>,
    /// `diffs[n]` is the differential leaving degree `n`.
    diffs: BTreeMap<i64, SparseMatrix<F>>,
}

impl<F: Scalar> ChainComplex<F> {
    pub fn new(direction: Direction, dims: BTreeMap<i64, usize>, diffs: BTreeMap<i64, SparseMatrix<F>>) -> Result<Self, Error> {
        let c = Self::new_unchecked(direction, dims, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Checks shapes only. Used where `d² = 0` is only expected on part of the range.
    pub fn new_unchecked(direction: Direction, dims: BTreeMap<i64, usize>, diffs: BTreeMap<i64, SparseMatrix<F>>) -> Result<Self, Error> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|x| x.1 > 0).collect();
        let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
        for (n, d) in &diffs {
            let target = n + direction.step();
            if d.shape() != (dim(target), dim(*n)) {
                return Err(Error::Shape(format!(
                    "differential from degree {} has shape {:?}, expected {:?}",
                    n,
                    d.shape(),
                    (dim(target), dim(*n))
                )));
            }
        }
        let diffs = diffs.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        Ok(ChainComplex { direction, dims, diffs })
    }

    /// Splits an operator on a graded based space into a complex. `op[j]` is the image of basis
    /// vector `j`; each basis vector must map into degree `degrees[j] + step`. Returns the complex
    /// and, for each global index, its `(degree, position)`.
    pub fn from_graded_operator(
        direction: Direction,
        degrees: &[i64],
        op: &[SVec<F>],
    ) -> Result<(Self, Vec<(i64, usize)>), Error> {
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        let mut place = Vec::with_capacity(degrees.len());
        for &d in degrees {
            let e = dims.entry(d).or_insert(0);
            place.push((d, *e));
            *e += 1;
        }
        let mut triplets: BTreeMap<i64, Vec<(usize, usize, F)>> = BTreeMap::new();
        for (j, col) in op.iter().enumerate() {
            let (dj, pj) = place[j];
            for (i, x) in col {
                let (di, pi) = place[*i];
                if di != dj + direction.step() {
                    return Err(Error::Invalid(format!("operator maps degree {} to degree {}", dj, di)));
                }
                triplets.entry(dj).or_default().push((pi, pj, x.clone()));
            }
        }
        let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
        let diffs = triplets
            .into_iter()
            .map(|(n, t)| (n, SparseMatrix::from_triplets(dim(n + direction.step()), dim(n), t)))
            .collect();
        Ok((Self::new(direction, dims, diffs)?, place))
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    /// Differential leaving degree `n`.
    pub fn differential(&self, n: i64) -> SparseMatrix<F> {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.dim(n + self.direction.step()), self.dim(n)))
    }

    /// Degrees `n` where the composite leaving `n` is nonzero.
    pub fn square_defects(&self) -> Vec<i64> {
        let mut bad = Vec::new();
        for (n, d) in &self.diffs {
            let next = n + self.direction.step();
            if let Some(d2) = self.diffs.get(&next) {
                if !d2.mul(d).is_zero() {
                    bad.push(*n);
                }
            }
        }
        bad
    }

    pub fn check_square_zero(&self) -> Result<(), Error> {
        match self.square_defects().first() {
            None => Ok(()),
            Some(n) => Err(Error::NotAComplex(format!("d∘d ≠ 0 starting at degree {}", n))),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|(d, c)| if d.rem_euclid(2) == 0 { *c as i64 } else { -(*c as i64) }).sum()
    }

    pub fn homology(&self) -> Homology<F> {
        let mut dims = BTreeMap::new();
        let mut reps = BTreeMap::new();
        for &n in self.dims.keys() {
            let (d, r) = self.homology_at(n);
            if d > 0 {
                dims.insert(n, d);
                reps.insert(n, r);
            }
        }
        Homology { direction: self.direction, dims, representatives: reps }
    }

    /// Dimension and deterministic representatives of homology in degree `n`.
    pub fn homology_at(&self, n: i64) -> (usize, Vec<SVec<F>>) {
        let dim = self.dim(n);
        if dim == 0 {
            return (0, Vec::new());
        }
        let out = self.differential(n);
        let kernel = out.kernel();
        let incoming = self.differential(n - self.direction.step());
        let mut e = Echelon::new(dim);
        for col in incoming.columns() {
            e.insert(col);
        }
        let mut reps = Vec::new();
        for k in kernel {
            if e.insert(k.clone()).is_some() {
                reps.push(k);
            }
        }
        (reps.len(), reps)
    }

    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        self.dims.keys().map(|&n| (n, self.homology_at(n).0)).filter(|x| x.1 > 0).collect()
    }

    /// Homology dimension computed from ranks only.
    pub fn betti(&self, n: i64) -> usize {
        let out_rank = self.differential(n).rank();
        let in_rank = self.differential(n - self.direction.step()).rank();
        self.dim(n) - out_rank - in_rank
    }

    /// Dual complex `Hom(C, 𝕜)` with the opposite direction.
    pub fn dual(&self) -> Self {
        let dir = match self.direction {
            Direction::Chain => Direction::Cochain,
            Direction::Cochain => Direction::Chain,
        };
        let diffs = self.diffs.iter().map(|(n, d)| (n + self.direction.step(), d.transpose())).collect();
        ChainComplex { direction: dir, dims: self.dims.clone(), diffs }
    }
}

#[derive(Clone, Debug)]
pub struct Homology<F: Scalar> {
    pub direction: Direction,
    pub dims: BTreeMap<i64, usize>,
    pub representatives: BTreeMap<i64, Vec<SVec<F>>>,
}

impl<F: Scalar> Homology<F> {
    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn as_graded_space(&self) -> GradedSpace {
        GradedSpace::from_dims(self.dims.clone())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.as_graded_space().euler_characteristic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type M = SparseMatrix<Rational>;

    #[test]
    fn zero_differential() {
        let c = ChainComplex::<Rational>::new(Direction::Chain, [(0, 2), (1, 3)].into(), BTreeMap::new()).unwrap();
        let h = c.homology();
        assert_eq!(h.dim(0), 2);
        assert_eq!(h.dim(1), 3);
    }

    #[test]
    fn exact_identity() {
        let c = ChainComplex::new(Direction::Chain, [(0, 1), (1, 1)].into(), [(1, M::identity(1))].into()).unwrap();
        assert!(c.homology().dims.is_empty());
    }

    #[test]
    fn two_to_one() {
        let c = ChainComplex::new(Direction::Chain, [(0, 1), (1, 2)].into(), [(1, M::from_i64(&[vec![1, 1]]))].into()).unwrap();
        let h = c.homology();
        assert_eq!(h.dim(1), 1);
        assert_eq!(h.dim(0), 0);
        assert_eq!(c.euler_characteristic(), h.euler_characteristic());
    }

    #[test]
    fn rejects_nonzero_square() {
        let d = M::identity(1);
        let r = ChainComplex::new(Direction::Chain, [(0, 1), (1, 1), (2, 1)].into(), [(1, d.clone()), (2, d)].into());
        assert!(r.is_err());
    }

    #[test]
    fn rejects_bad_shape() {
        let r = ChainComplex::new(Direction::Cochain, [(0, 1), (1, 2)].into(), [(0, M::identity(1))].into());
        assert!(r.is_err());
    }

    #[test]
    fn dual_has_same_betti() {
        let c = ChainComplex::new(Direction::Chain, [(0, 1), (1, 2)].into(), [(1, M::from_i64(&[vec![1, 1]]))].into()).unwrap();
        let d = c.dual();
        assert_eq!(d.direction(), Direction::Cochain);
        assert_eq!(d.homology_dims(), c.homology_dims());
    }
}
