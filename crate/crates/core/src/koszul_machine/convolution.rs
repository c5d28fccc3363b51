use crate::exactalg::{svec_add, SVec, Scalar, SparseMatrix};
use crate::operad_core::{sort_labels, subsets, KoszulDual, QuotientOperad, Tree, TruncatedCooperad, TruncatedOperad};
use crate::symcore::Permutation;
use crate::Error;

/// Homogeneous element of the convolution operad: maps `C(n) → P(n)` raising degree by `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionElement<F: Scalar> {
    pub degree: i64,
    /// `maps[n]` for `n = 0..=max_arity`.
    pub maps: Vec<SparseMatrix<F>>,
}

impl<F: Scalar> ConvolutionElement<F> {
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        ConvolutionElement { degree: self.degree, maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        ConvolutionElement { degree: self.degree, maps: self.maps.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }
}

/// Convolution operad `Hom(C, P)` with its pre-Lie product and derivative.
pub struct Convolution<'a, F: Scalar> {
    pub cooperad: &'a TruncatedCooperad<F>,
    pub operad: &'a TruncatedOperad<F>,
}

impl<'a, F: Scalar> Convolution<'a, F> {
    pub fn new(cooperad: &'a TruncatedCooperad<F>, operad: &'a TruncatedOperad<F>) -> Result<Self, Error> {
        if cooperad.max_arity() != operad.max_arity() {
            return Err(Error::Arity(format!(
                "cooperad truncated at {} but operad at {}",
                cooperad.max_arity(),
                operad.max_arity()
            )));
        }
        Ok(Convolution { cooperad, operad })
    }

    pub fn max_arity(&self) -> usize {
        self.operad.max_arity()
    }

    pub fn zero(&self, degree: i64) -> ConvolutionElement<F> {
        let maps = (0..=self.max_arity()).map(|n| SparseMatrix::zero(self.operad.dim(n), self.cooperad.dim(n))).collect();
        ConvolutionElement { degree, maps }
    }

    fn check_shape(&self, f: &ConvolutionElement<F>) -> Result<(), Error> {
        if f.maps.len() != self.max_arity() + 1 {
            return Err(Error::Arity(format!("element known up to arity {}, expected {}", f.maps.len() as i64 - 1, self.max_arity())));
        }
        for (n, m) in f.maps.iter().enumerate() {
            if m.shape() != (self.operad.dim(n), self.cooperad.dim(n)) {
                return Err(Error::Shape(format!("arity {} map has shape {:?}", n, m.shape())));
            }
        }
        Ok(())
    }

    /// Checks shapes, degree homogeneity and Σ-equivariance.
    pub fn validate(&self, f: &ConvolutionElement<F>) -> Result<(), Error> {
        self.check_shape(f)?;
        for n in 1..=self.max_arity() {
            for (r, c, _) in f.maps[n].entries() {
                if self.operad.degree(n, r) != self.cooperad.degree(n, c) + f.degree {
                    return Err(Error::Invalid(format!("arity {} map is not homogeneous of degree {}", n, f.degree)));
                }
            }
            for q in 0..n - 1 {
                let gp = &self.operad.carrier.component(n).gens[q];
                let gc = &self.cooperad.carrier.component(n).gens[q];
                if gp.mul(&f.maps[n]) != f.maps[n].mul(gc) {
                    return Err(Error::Invalid(format!("arity {} map is not Σ-equivariant", n)));
                }
            }
        }
        Ok(())
    }

    /// Averages a map over the symmetric groups, producing an equivariant one.
    pub fn symmetrize(&self, f: &ConvolutionElement<F>) -> ConvolutionElement<F> {
        let mut maps = Vec::new();
        for (n, m) in f.maps.iter().enumerate() {
            if n < 2 {
                maps.push(m.clone());
                continue;
            }
            let perms = Permutation::all(n);
            let mut acc = SparseMatrix::zero(m.rows(), m.cols());
            for p in &perms {
                let inv = p.inverse();
                let term = self.operad.carrier.component(n).act(&inv).mul(m).mul(&self.cooperad.carrier.component(n).act(p));
                acc = acc.add(&term);
            }
            let k = F::from_i64(perms.len() as i64).inv().expect("n! invertible");
            maps.push(acc.scale(&k));
        }
        ConvolutionElement { degree: f.degree, maps }
    }

    /// `f ⋆ g`: decompose once, apply `f ⊗ g`, compose.
    pub fn star(&self, f: &ConvolutionElement<F>, g: &ConvolutionElement<F>) -> Result<ConvolutionElement<F>, Error> {
        self.check_shape(f)?;
        self.check_shape(g)?;
        let fcols: Vec<Vec<SVec<F>>> = f.maps.iter().map(|m| m.columns()).collect();
        let gcols: Vec<Vec<SVec<F>>> = g.maps.iter().map(|m| m.columns()).collect();
        let mut maps = vec![SparseMatrix::zero(0, 0)];
        for n in 1..=self.max_arity() {
            let mut cols = Vec::with_capacity(self.cooperad.dim(n));
            for c in 0..self.cooperad.dim(n) {
                let mut out: SVec<F> = Vec::new();
                for subset in subsets(n) {
                    let s = subset.len();
                    let r = n + 1 - s;
                    let i = subset[0];
                    let (labels, dec) = self.cooperad.decompose_subset(n, &[(c, F::one())], &subset);
                    let ds = self.cooperad.dim(s);
                    for (idx, x) in dec {
                        let (a, b) = (idx / ds, idx % ds);
                        let (fa, gb) = (&fcols[r][a], &gcols[s][b]);
                        if fa.is_empty() || gb.is_empty() {
                            continue;
                        }
                        let odd = (g.degree * self.cooperad.degree(r, a)).rem_euclid(2) == 1;
                        let raw = self.operad.compose(r, i, fa, s, gb);
                        let mut ls = labels.clone();
                        let term = sort_labels(self.operad.carrier.component(n), raw, &mut ls);
                        let coef = if odd { -x } else { x };
                        out = svec_add(&out, &coef, &term);
                    }
                }
                cols.push(out);
            }
            maps.push(SparseMatrix::from_columns(self.operad.dim(n), &cols));
        }
        Ok(ConvolutionElement { degree: f.degree + g.degree, maps })
    }

    /// `[f, g] = f⋆g − (−1)^{|f||g|} g⋆f`.
    pub fn bracket(&self, f: &ConvolutionElement<F>, g: &ConvolutionElement<F>) -> Result<ConvolutionElement<F>, Error> {
        let fg = self.star(f, g)?;
        let gf = self.star(g, f)?;
        let sign = if (f.degree * g.degree).rem_euclid(2) == 1 { F::one() } else { -F::one() };
        Ok(fg.add(&gf.scale(&sign)))
    }

    /// `∂f = d_P ∘ f − (−1)^{|f|} f ∘ d_C`; zero differentials are allowed to be absent.
    pub fn derivative(&self, f: &ConvolutionElement<F>) -> Result<ConvolutionElement<F>, Error> {
        self.check_shape(f)?;
        let mut out = self.zero(f.degree - 1);
        for n in 0..=self.max_arity() {
            let mut m = SparseMatrix::zero(self.operad.dim(n), self.cooperad.dim(n));
            if let Some(dp) = &self.operad.differential {
                m = m.add(&dp[n].mul(&f.maps[n]));
            }
            if let Some(dc) = &self.cooperad.differential {
                let sign = if f.degree.rem_euclid(2) == 1 { F::one() } else { -F::one() };
                m = m.add(&f.maps[n].mul(&dc[n]).scale(&sign));
            }
            out.maps[n] = m;
        }
        Ok(out)
    }

    /// `∂α + α⋆α`, which vanishes exactly for twisting morphisms.
    pub fn maurer_cartan(&self, alpha: &ConvolutionElement<F>) -> Result<ConvolutionElement<F>, Error> {
        Ok(self.derivative(alpha)?.add(&self.star(alpha, alpha)?))
    }
}

/// Degree −1 solution of the Maurer–Cartan equation.
#[derive(Clone, Debug)]
pub struct TwistingMorphism<F: Scalar> {
    pub alpha: ConvolutionElement<F>,
}

impl<F: Scalar> TwistingMorphism<F> {
    pub fn new(conv: &Convolution<'_, F>, alpha: ConvolutionElement<F>) -> Result<Self, Error> {
        if alpha.degree != -1 {
            return Err(Error::Invalid(format!("twisting morphisms have degree −1, got {}", alpha.degree)));
        }
        conv.validate(&alpha)?;
        if !conv.maurer_cartan(&alpha)?.is_zero() {
            return Err(Error::Invalid("Maurer–Cartan equation fails".into()));
        }
        Ok(TwistingMorphism { alpha })
    }
}

/// `κ : C(sE, s²R) → P(E, R)`: desuspension of weight-one elements onto the generators.
pub fn koszul_morphism<F: Scalar>(dual: &KoszulDual<F>, operad: &QuotientOperad<F>) -> ConvolutionElement<F> {
    let max = operad.operad.max_arity();
    let mut maps = Vec::new();
    for n in 0..=max {
        let dc = dual.cooperad.dim(n);
        let dp = operad.operad.dim(n);
        let mut entries = Vec::new();
        if n >= 2 {
            for (a, t) in dual.pivots[n].iter().enumerate() {
                if let Tree::Node { children, .. } = t {
                    if children.iter().all(|c| matches!(c, Tree::Leaf(_))) {
                        let pos = operad.projections[n].basis.iter().position(|&b| &operad.bases[n].trees[b] == t);
                        if let Some(p) = pos {
                            entries.push((p, a, F::one()));
                        }
                    }
                }
            }
        }
        maps.push(SparseMatrix::from_triplets(dp, dc, entries));
    }
    ConvolutionElement { degree: -1, maps }
}
