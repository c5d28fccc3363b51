//! Cotriples from the induction–restriction adjunction, the simplicial bar objects they
//! generate, and relative (co)homology of algebras.

pub(crate) mod engine;

use std::collections::{BTreeMap, HashMap};

use crate::algebra_complexes::{certificate, chain_complex, cochain_complex};
use crate::exactalg::{ChainComplex, Direction, SVec, Scalar, SparseMatrix};
use crate::koszul_machine::KoszulnessReport;
use crate::operad_core::ClassicalOperad;
use crate::palgebra::{check_algebra, regular_module, validate_module, AlgebraMorphism, PAlgebra, PModule};
use crate::symcore::Coinvariants;
use crate::Error;

use engine::{adapt, clean, right_word, Cosets, Element, Tower};
pub use engine::Truncation;

/// Right `U(A)`-module, given by the right action of each generator of `U(A)`.
#[derive(Clone, Debug)]
pub struct RightModule<F: Scalar> {
    pub kind: ClassicalOperad,
    pub names: Vec<String>,
    pub weights: Vec<i64>,
    /// `actions[g]` sends `m` to `m·g`.
    pub actions: Vec<SparseMatrix<F>>,
}

impl<F: Scalar> RightModule<F> {
    /// Right module of a left module through the antipode: `m·x = −x·m` for Lie, `x·m` for
    /// Com, and the two sides exchanged for Asc.
    pub fn from_left(m: &PModule<F>) -> Self {
        let actions = match m.kind {
            ClassicalOperad::Lie => m.actions.iter().map(|a| a.scale(&-F::one())).collect(),
            ClassicalOperad::Com => m.actions.clone(),
            ClassicalOperad::Asc => {
                let n = m.actions.len() / 2;
                (0..2 * n).map(|g| m.actions[(g + n) % (2 * n)].clone()).collect()
            }
        };
        RightModule { kind: m.kind, names: m.names.clone(), weights: m.weights.clone(), actions }
    }

    /// Linear dual `Hom(N, 𝕜)` with `(φ·u)(v) = φ(u·v)`.
    pub fn dual_of(n: &PModule<F>) -> Self {
        RightModule {
            kind: n.kind,
            names: n.names.iter().map(|x| format!("{}*", x)).collect(),
            weights: n.weights.iter().map(|w| -w).collect(),
            actions: n.actions.iter().map(|a| a.transpose()).collect(),
        }
    }

    pub fn trivial(a: &PAlgebra<F>) -> Self {
        Self::from_left(&crate::palgebra::trivial_module(a))
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }
}

/// The cotriple `T = U(A) ⊗_{U(B)} −` on `A`-modules with counit `u ⊗ m ↦ u·m` and
/// comultiplication `u ⊗ m ↦ u ⊗ 1 ⊗ m`.
#[derive(Clone, Debug)]
pub struct Cotriple<F: Scalar> {
    pub morphism: AlgebraMorphism<F>,
}

pub fn cotriple_from_adjunction<F: Scalar>(f: &AlgebraMorphism<F>) -> Result<Cotriple<F>, Error> {
    check_algebra(&f.source)?;
    check_algebra(&f.target)?;
    Cosets::new(f)?;
    Ok(Cotriple { morphism: f.clone() })
}

/// Result of checking the cotriple identities on one module.
#[derive(Clone, Debug)]
pub struct CotripleLaws {
    /// `(weight, dim X_w, dim T(X)_w)`.
    pub dims: Vec<(i64, usize, usize)>,
    pub failures: Vec<String>,
}

impl CotripleLaws {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<F: Scalar> Cotriple<F> {
    /// Weight dimensions of `T(X)` within the truncation.
    pub fn apply(&self, x: &PModule<F>, weight_bound: i64) -> Result<BTreeMap<i64, usize>, Error> {
        let s = bar_simplicial(&self.morphism, x, 0, weight_bound)?;
        Ok(s.components.iter().map(|(w, c)| (*w, c.dims[0])).collect())
    }

    /// Counit laws `εT∘δ = Tε∘δ = id` and coassociativity `δT∘δ = Tδ∘δ`, as matrices per weight.
    pub fn check_laws(&self, x: &PModule<F>, weight_bound: i64) -> Result<CotripleLaws, Error> {
        let s = bar_simplicial(&self.morphism, x, 2, weight_bound)?;
        let mut failures = Vec::new();
        let mut dims = Vec::new();
        for (w, c) in &s.components {
            dims.push((*w, c.augmentation.rows(), c.dims[0]));
            let id = SparseMatrix::identity(c.dims[0]);
            let delta = &c.degeneracies[0][0];
            if c.faces[1][0].mul(delta) != id {
                failures.push(format!("εT∘δ ≠ id in weight {}", w));
            }
            if c.faces[1][1].mul(delta) != id {
                failures.push(format!("Tε∘δ ≠ id in weight {}", w));
            }
            if c.degeneracies[1][0].mul(delta) != c.degeneracies[1][1].mul(delta) {
                failures.push(format!("δT∘δ ≠ Tδ∘δ in weight {}", w));
            }
        }
        Ok(CotripleLaws { dims, failures })
    }
}

/// One weight component of a simplicial module.
#[derive(Clone, Debug)]
pub struct SimplicialComponent<F: Scalar> {
    pub weight: i64,
    pub dims: Vec<usize>,
    /// Basis tuples per level, rendered.
    pub basis_names: Vec<Vec<String>>,
    /// `faces[n][i]`: level `n` to level `n − 1`; empty for `n = 0`.
    pub faces: Vec<Vec<SparseMatrix<F>>>,
    /// `degeneracies[n][i]`: level `n` to level `n + 1`, for `n` below the top level.
    pub degeneracies: Vec<Vec<SparseMatrix<F>>>,
    /// Counit from level 0 to the weight component of the module.
    pub augmentation: SparseMatrix<F>,
}

impl<F: Scalar> SimplicialComponent<F> {
    /// Unnormalized complex `d = Σ (−1)^i ∂_i`.
    pub fn chain_complex(&self) -> Result<ChainComplex<F>, Error> {
        let dims = self.dims.iter().enumerate().map(|(n, d)| (n as i64, *d)).collect();
        let mut diffs = BTreeMap::new();
        for n in 1..self.dims.len() {
            diffs.insert(n as i64, alternating(&self.faces[n], self.dims[n - 1], self.dims[n]));
        }
        ChainComplex::new(Direction::Chain, dims, diffs)
    }

    /// The complex augmented by the counit, with the module in degree −1.
    pub fn augmented_complex(&self) -> Result<ChainComplex<F>, Error> {
        let mut dims: BTreeMap<i64, usize> = self.dims.iter().enumerate().map(|(n, d)| (n as i64, *d)).collect();
        dims.insert(-1, self.augmentation.rows());
        let mut diffs = BTreeMap::new();
        diffs.insert(0, self.augmentation.clone());
        for n in 1..self.dims.len() {
            diffs.insert(n as i64, alternating(&self.faces[n], self.dims[n - 1], self.dims[n]));
        }
        ChainComplex::new(Direction::Chain, dims, diffs)
    }

    /// Quotient by the span of the degeneracies.
    pub fn normalized_complex(&self) -> Result<ChainComplex<F>, Error> {
        let quotients: Vec<Coinvariants<F>> = (0..self.dims.len())
            .map(|n| {
                let rels: Vec<SVec<F>> = if n == 0 { Vec::new() } else { self.degeneracies[n - 1].iter().flat_map(|s| s.columns()).collect() };
                Coinvariants::from_relations(self.dims[n], rels.into_iter())
            })
            .collect();
        let dims = quotients.iter().enumerate().map(|(n, q)| (n as i64, q.dim())).collect();
        let mut diffs = BTreeMap::new();
        for n in 1..self.dims.len() {
            let d = alternating(&self.faces[n], self.dims[n - 1], self.dims[n]);
            let lift = SparseMatrix::from_columns(self.dims[n], &quotients[n].basis.iter().map(|&b| vec![(b, F::one())]).collect::<Vec<_>>());
            diffs.insert(n as i64, quotients[n - 1].projection.mul(&d).mul(&lift));
        }
        ChainComplex::new(Direction::Chain, dims, diffs)
    }

    /// Violations of the simplicial identities.
    pub fn identity_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let top = self.dims.len() - 1;
        let w = self.weight;
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    if self.faces[n - 1][i].mul(&self.faces[n][j]) != self.faces[n - 1][j - 1].mul(&self.faces[n][i]) {
                        out.push(format!("weight {}: ∂{}∂{} ≠ ∂{}∂{} on level {}", w, i, j, j - 1, i, n));
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    if self.degeneracies[n + 1][i].mul(&self.degeneracies[n][j]) != self.degeneracies[n + 1][j + 1].mul(&self.degeneracies[n][i]) {
                        out.push(format!("weight {}: σ{}σ{} ≠ σ{}σ{} on level {}", w, i, j, j + 1, i, n));
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                let s = &self.degeneracies[n][j];
                for i in 0..=n + 1 {
                    let lhs = self.faces[n + 1][i].mul(s);
                    let rhs = if i < j {
                        self.degeneracies[n - 1][j - 1].mul(&self.faces[n][i])
                    } else if i == j || i == j + 1 {
                        SparseMatrix::identity(self.dims[n])
                    } else {
                        self.degeneracies[n - 1][j].mul(&self.faces[n][i - 1])
                    };
                    if lhs != rhs {
                        out.push(format!("weight {}: ∂{}σ{} wrong on level {}", w, i, j, n));
                    }
                }
            }
        }
        out
    }
}

fn alternating<F: Scalar>(faces: &[SparseMatrix<F>], rows: usize, cols: usize) -> SparseMatrix<F> {
    faces
        .iter()
        .enumerate()
        .fold(SparseMatrix::zero(rows, cols), |acc, (i, d)| acc.add_scaled(&F::sign(i % 2 == 1), d))
}

/// `BD(A, B, X)`: level `n` is `T^{n+1}(X)`, computed per weight.
#[derive(Clone, Debug)]
pub struct SimplicialModule<F: Scalar> {
    pub max_level: usize,
    pub truncation: Truncation,
    pub description: String,
    pub components: BTreeMap<i64, SimplicialComponent<F>>,
}

impl<F: Scalar> SimplicialModule<F> {
    pub fn identity_failures(&self) -> Vec<String> {
        self.components.values().flat_map(|c| c.identity_failures()).collect()
    }

    /// Levels whose homology the construction computes exactly.
    pub fn certified_levels(&self) -> usize {
        let cap = self.truncation.certified_below().unwrap_or(usize::MAX);
        self.max_level.min(cap)
    }

    /// Homology per weight in the certified levels.
    pub fn homology(&self) -> Result<BTreeMap<i64, BTreeMap<i64, usize>>, Error> {
        let top = self.certified_levels() as i64;
        self.components
            .iter()
            .map(|(w, c)| {
                let cx = c.chain_complex()?;
                Ok((*w, (0..top).map(|n| (n, cx.betti(n))).collect()))
            })
            .collect()
    }
}

fn level_matrix<F: Scalar>(
    images: impl Iterator<Item = Element<F>>,
    index: &HashMap<Vec<usize>, usize>,
    rows: usize,
    what: &str,
) -> SparseMatrix<F> {
    let cols: Vec<SVec<F>> = images
        .map(|e| {
            let mut v: SVec<F> = e
                .into_iter()
                .map(|(k, c)| (*index.get(&k).unwrap_or_else(|| panic!("{} left the truncation at {:?}", what, k)), c))
                .collect();
            v.sort_by_key(|x| x.0);
            v
        })
        .collect();
    SparseMatrix::from_columns(rows, &cols)
}

/// Bar object of `X` for the cotriple of `f`, levels `0..=max_level`, weights within the bound.
pub fn bar_simplicial<F: Scalar>(f: &AlgebraMorphism<F>, x: &PModule<F>, max_level: usize, weight_bound: i64) -> Result<SimplicialModule<F>, Error> {
    if let Some(p) = validate_module(&f.target, x).first() {
        return Err(Error::Invalid(format!("module does not match the algebra: {}", p)));
    }
    if x.bound.is_some() {
        return Err(Error::Invalid("bar objects need an untruncated module".into()));
    }
    let cosets = Cosets::new(f)?;
    let truncation = cosets.choose_truncation(weight_bound, max_level + 1)?;
    let description = engine::describe_base(&f.target, &cosets);
    let mut tower = Tower::new(cosets, &x.actions, x.weights.clone(), x.names.clone());
    let levels: Vec<BTreeMap<i64, Vec<Vec<usize>>>> = (0..=max_level).map(|n| tower.level_keys(n + 1, truncation, 0)).collect();
    let mut weights: Vec<i64> = levels.iter().flat_map(|l| l.keys().copied()).collect();
    weights.sort();
    weights.dedup();
    let mut components = BTreeMap::new();
    for w in weights {
        let bases: Vec<Vec<Vec<usize>>> = levels.iter().map(|l| l.get(&w).cloned().unwrap_or_default()).collect();
        let indices: Vec<HashMap<Vec<usize>, usize>> =
            bases.iter().map(|b| b.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut faces = vec![Vec::new()];
        for n in 1..=max_level {
            let fs = (0..=n)
                .map(|i| {
                    let images: Vec<Element<F>> = bases[n].iter().map(|k| tower.face(i, k)).collect();
                    level_matrix(images.into_iter(), &indices[n - 1], dims[n - 1], "face")
                })
                .collect();
            faces.push(fs);
        }
        let mut degeneracies = Vec::new();
        for n in 0..max_level {
            let ds = (0..=n)
                .map(|i| {
                    let images = bases[n].iter().map(|k| Element::from([(tower.degeneracy(i, k), F::one())]));
                    level_matrix(images, &indices[n + 1], dims[n + 1], "degeneracy")
                })
                .collect();
            degeneracies.push(ds);
        }
        let x_index: HashMap<Vec<usize>, usize> =
            (0..x.dim()).filter(|&i| x.weights[i] == w).enumerate().map(|(p, i)| (vec![i], p)).collect();
        let augmentation = level_matrix(bases[0].iter().map(|k| tower.face(0, k)), &x_index, x_index.len(), "counit");
        let basis_names = bases.iter().map(|b| b.iter().map(|k| tower.key_name(k)).collect()).collect();
        components.insert(w, SimplicialComponent { weight: w, dims, basis_names, faces, degeneracies, augmentation });
    }
    Ok(SimplicialModule { max_level, truncation, description, components })
}

/// `M ⊗_{U(A)} BD(A, B, A)` per weight, degrees `0..=n_max`.
#[derive(Clone, Debug)]
pub struct RelativeComplex<F: Scalar> {
    pub n_max: usize,
    pub truncation: Truncation,
    pub description: String,
    pub components: BTreeMap<i64, ChainComplex<F>>,
}

impl<F: Scalar> RelativeComplex<F> {
    pub fn certified_degrees(&self) -> usize {
        self.n_max.min(self.truncation.certified_below().unwrap_or(usize::MAX))
    }
}

/// Relative (co)homology per weight, with the degrees left unverified by the truncation.
#[derive(Clone, Debug)]
pub struct RelativeHomology {
    pub direction: Direction,
    /// Weight (homology) or weight shift of the cochains (cohomology) → degree → dimension.
    pub by_weight: BTreeMap<i64, BTreeMap<i64, usize>>,
    pub certified_degrees: usize,
    pub unverified: Vec<i64>,
    pub truncation: Truncation,
    pub notes: Vec<String>,
}

impl RelativeHomology {
    pub fn totals(&self) -> BTreeMap<i64, usize> {
        let mut out: BTreeMap<i64, usize> = (0..self.certified_degrees as i64).map(|n| (n, 0)).collect();
        for h in self.by_weight.values() {
            for (n, d) in h {
                *out.entry(*n).or_insert(0) += d;
            }
        }
        out
    }
}

/// Chain complex computing `M ⊗_{U(A)} BD(A, B, A) ≅ M ⊗_{U(B)} T^n(A)` in degree `n`.
pub fn relative_chain_complex<F: Scalar>(
    f: &AlgebraMorphism<F>,
    m: &RightModule<F>,
    n_max: usize,
    weight_bound: i64,
) -> Result<RelativeComplex<F>, Error> {
    let cells = relative_cells(f, m, n_max, weight_bound, false)?;
    Ok(cells.into_complex(n_max))
}

/// The same complex modulo the images of the degeneracies.
pub fn normalized_relative_chain_complex<F: Scalar>(
    f: &AlgebraMorphism<F>,
    m: &RightModule<F>,
    n_max: usize,
    weight_bound: i64,
) -> Result<RelativeComplex<F>, Error> {
    let cells = relative_cells(f, m, n_max, weight_bound, true)?;
    Ok(cells.into_complex(n_max))
}

/// One degree of one weight component: tuple keys `[m, r_1, …, r_n, a]` and the quotient by the
/// `U(B)`-balancing relations (and the degenerate tuples, when normalized).
pub(crate) struct Level<F: Scalar> {
    pub keys: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
    pub quotient: Coinvariants<F>,
}

pub(crate) struct RelativeCells<F: Scalar> {
    pub truncation: Truncation,
    pub description: String,
    pub components: BTreeMap<i64, (Vec<Level<F>>, ChainComplex<F>)>,
}

impl<F: Scalar> RelativeCells<F> {
    fn into_complex(self, n_max: usize) -> RelativeComplex<F> {
        RelativeComplex {
            n_max,
            truncation: self.truncation,
            description: self.description,
            components: self.components.into_iter().map(|(w, (_, c))| (w, c)).collect(),
        }
    }
}

fn is_degenerate(key: &[usize]) -> bool {
    key.len() > 2 && key[1..key.len() - 1].contains(&0)
}

pub(crate) fn relative_cells<F: Scalar>(
    f: &AlgebraMorphism<F>,
    m: &RightModule<F>,
    n_max: usize,
    weight_bound: i64,
    normalized: bool,
) -> Result<RelativeCells<F>, Error> {
    let a = &f.target;
    check_algebra(a)?;
    check_algebra(&f.source)?;
    if m.kind != a.kind || m.actions.len() != regular_module(a).actions.len() || m.actions.iter().any(|x| x.shape() != (m.dim(), m.dim())) {
        return Err(Error::Invalid("coefficient module does not match the algebra".into()));
    }
    let cosets = Cosets::new(f)?;
    let truncation = cosets.choose_truncation(weight_bound, n_max)?;
    let description = engine::describe_base(a, &cosets);
    let split = cosets.split();
    let base_weights: Vec<i64> = cosets.generator_weights[split..].to_vec();
    let right_ops = adapt(&cosets.change, &m.actions);
    let right_cols: Vec<Vec<SVec<F>>> = right_ops.iter().map(|op| op.columns()).collect();
    let x = regular_module(a);
    let mut tower = Tower::new(cosets, &x.actions, x.weights.clone(), x.names.clone());
    let m_max = m.weights.iter().map(|w| w.abs()).max().unwrap_or(0);
    let b_max = base_weights.iter().map(|w| w.abs()).max().unwrap_or(0);
    // Degree n: keys [m, r_1, …, r_n, a].
    let mut spaces: Vec<BTreeMap<i64, Vec<Vec<usize>>>> = Vec::new();
    for n in 0..=n_max {
        let tails = tower.level_keys(n, truncation, m_max + b_max);
        let mut by_weight: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        for (tw, keys) in &tails {
            for (mi, mw) in m.weights.iter().enumerate() {
                let w = tw + mw;
                if let Truncation::Weight(b) = truncation {
                    if w.abs() > b + b_max {
                        continue;
                    }
                }
                for k in keys {
                    let mut full = vec![mi];
                    full.extend_from_slice(k);
                    if !(normalized && is_degenerate(&full)) {
                        by_weight.entry(w).or_default().push(full);
                    }
                }
            }
        }
        spaces.push(by_weight);
    }
    let mut weights: Vec<i64> = spaces.iter().flat_map(|s| s.keys().copied()).collect();
    weights.sort();
    weights.dedup();
    if let Truncation::Weight(b) = truncation {
        weights.retain(|w| w.abs() <= b);
    }
    let empty = Vec::new();
    // Sparse vector over `index`; degenerate keys are zero when normalized.
    let to_vec = |e: Element<F>, index: &HashMap<Vec<usize>, usize>| -> SVec<F> {
        let mut v: SVec<F> = clean(e)
            .into_iter()
            .filter(|(k, _)| !(normalized && is_degenerate(k)))
            .map(|(k, c)| (*index.get(&k).unwrap_or_else(|| panic!("relative complex left the truncation at {:?}", k)), c))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    };
    let mut components = BTreeMap::new();
    for w in weights {
        // Quotient by m·β ⊗ y − m ⊗ β·y for base generators β.
        let mut levels = Vec::new();
        for n in 0..=n_max {
            let keys = spaces[n].get(&w).cloned().unwrap_or_default();
            let index: HashMap<Vec<usize>, usize> = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
            let mut rels: Vec<SVec<F>> = Vec::new();
            for (bi, bw) in base_weights.iter().enumerate() {
                let beta = split + bi;
                for src in spaces[n].get(&(w - bw)).unwrap_or(&empty) {
                    let mut acc = Element::new();
                    for (mi, c) in &right_cols[beta][src[0]] {
                        let mut k = src.clone();
                        k[0] = *mi;
                        engine::add_into(&mut acc, k, c.clone());
                    }
                    for (k, c) in tower.act(beta, &src[1..]) {
                        let mut full = vec![src[0]];
                        full.extend(k);
                        engine::add_into(&mut acc, full, -c);
                    }
                    rels.push(to_vec(acc, &index));
                }
            }
            let quotient = Coinvariants::from_relations(keys.len(), rels.into_iter());
            levels.push(Level { keys, index, quotient });
        }
        let dims = levels.iter().enumerate().map(|(n, l)| (n as i64, l.quotient.dim())).collect();
        let mut diffs = BTreeMap::new();
        for n in 1..=n_max {
            let (src, tgt) = (&levels[n], &levels[n - 1]);
            let mut cols = Vec::new();
            for &b in &src.quotient.basis {
                let key = &src.keys[b];
                let mut acc = Element::new();
                let word = tower.cosets.word(key[1]);
                for (mi, c) in right_word(&right_cols, &word, key[0]) {
                    let mut k = vec![mi];
                    k.extend_from_slice(&key[2..]);
                    engine::add_into(&mut acc, k, c);
                }
                for i in 1..=n {
                    let sign = F::sign(i % 2 == 1);
                    for (k, c) in tower.face(i - 1, &key[1..]) {
                        let mut full = vec![key[0]];
                        full.extend(k);
                        engine::add_into(&mut acc, full, sign.clone() * c);
                    }
                }
                cols.push(tgt.quotient.projection.apply(&to_vec(acc, &tgt.index)));
            }
            diffs.insert(n as i64, SparseMatrix::from_columns(tgt.quotient.dim(), &cols));
        }
        let complex = ChainComplex::new(Direction::Chain, dims, diffs)?;
        components.insert(w, (levels, complex));
    }
    Ok(RelativeCells { truncation, description, components })
}

fn truncation_notes(t: Truncation) -> Vec<String> {
    match t {
        Truncation::Weight(b) => vec![format!("weight components |w| ≤ {} computed exactly; other weights omitted", b)],
        Truncation::PbwLength(p) => vec![format!(
            "weight components are infinite; computed on the subcomplex of total PBW length ≤ {}, exact in degrees < {}",
            p, p
        )],
        Truncation::Exact => vec!["U(A) is finite-dimensional; no truncation".into()],
    }
}

/// `H_n(A, B, M)` per weight in degrees below `n_max`.
pub fn relative_homology<F: Scalar>(f: &AlgebraMorphism<F>, m: &RightModule<F>, n_max: usize, weight_bound: i64) -> Result<RelativeHomology, Error> {
    let cx = relative_chain_complex(f, m, n_max, weight_bound)?;
    let top = cx.certified_degrees();
    let by_weight = cx.components.iter().map(|(w, c)| (*w, (0..top as i64).map(|n| (n, c.betti(n))).collect())).collect();
    Ok(RelativeHomology {
        direction: Direction::Chain,
        by_weight,
        certified_degrees: top,
        unverified: (top as i64..=n_max as i64).collect(),
        truncation: cx.truncation,
        notes: truncation_notes(cx.truncation),
    })
}

/// `H^n(A, B, N)` per weight shift, from `Hom_{U(A)}(BD(A,B,A), N) ≅ (N* ⊗_{U(A)} BD(A,B,A))*`.
pub fn relative_cohomology<F: Scalar>(f: &AlgebraMorphism<F>, n: &PModule<F>, n_max: usize, weight_bound: i64) -> Result<RelativeHomology, Error> {
    if let Some(p) = validate_module(&f.target, n).first() {
        return Err(Error::Invalid(format!("module does not match the algebra: {}", p)));
    }
    let cx = relative_chain_complex(f, &RightModule::dual_of(n), n_max, weight_bound)?;
    let top = cx.certified_degrees();
    let by_weight = cx
        .components
        .iter()
        .map(|(w, c)| {
            let d = c.dual();
            (-*w, (0..top as i64).map(|k| (k, d.betti(k))).collect())
        })
        .collect();
    let mut notes = truncation_notes(cx.truncation);
    notes.push("cochains are keyed by the weight shift s of φ: T^n(A)_v → N_{v+s}".into());
    Ok(RelativeHomology {
        direction: Direction::Cochain,
        by_weight,
        certified_degrees: top,
        unverified: (top as i64..=n_max as i64).collect(),
        truncation: cx.truncation,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMatch {
    pub degree: i64,
    pub relative: usize,
    pub operadic: usize,
}

/// Relative (co)homology over the zero algebra next to operadic (co)homology.
#[derive(Clone, Debug)]
pub struct KoszulComparison {
    pub kind: ClassicalOperad,
    /// `n_relative = n_operadic + degree_shift`.
    pub degree_shift: i64,
    pub homology: Vec<DegreeMatch>,
    pub cohomology: Vec<DegreeMatch>,
    pub koszulness: KoszulnessReport,
    pub notes: Vec<String>,
}

impl KoszulComparison {
    pub fn agrees(&self) -> bool {
        self.homology.iter().chain(&self.cohomology).all(|d| d.relative == d.operadic)
    }

    pub fn mismatches(&self) -> Vec<String> {
        let show = |side: &str, v: &[DegreeMatch]| -> Vec<String> {
            v.iter()
                .filter(|d| d.relative != d.operadic)
                .map(|d| format!("{} degree {}: relative {} vs operadic {}", side, d.degree, d.relative, d.operadic))
                .collect()
        };
        let mut out = show("homology", &self.homology);
        out.extend(show("cohomology", &self.cohomology));
        out
    }
}

/// Homology with trivial coefficients and cohomology with coefficients in `n`, both over the
/// zero base, against the operadic complexes in degrees below `n_max`.
pub fn compare_with_koszul<F: Scalar>(a: &PAlgebra<F>, n: &PModule<F>, n_max: usize, weight_bound: i64) -> Result<KoszulComparison, Error> {
    let base = AlgebraMorphism::from_zero(a);
    let rel_h = relative_homology(&base, &RightModule::trivial(a), n_max, weight_bound)?;
    let rel_c = relative_cohomology(&base, n, n_max, weight_bound)?;
    let op_h = chain_complex(a, n_max)?.homology();
    let op_c = cochain_complex(a, n, n_max)?.cohomology();
    let pair = |rel: BTreeMap<i64, usize>, op: BTreeMap<i64, usize>, top: usize| -> Vec<DegreeMatch> {
        (0..top.min(n_max) as i64)
            .map(|d| DegreeMatch { degree: d, relative: rel.get(&d).copied().unwrap_or(0), operadic: op.get(&d).copied().unwrap_or(0) })
            .collect()
    };
    // Certified up to the top arity of the chain side.
    let koszulness = certificate::<F>(a.kind, (n_max + 1).max(3))?;
    let mut notes = vec![
        "base: the zero algebra of the same operad (U = 𝕜)".to_string(),
        "degree convention: relative degree n is compared with operadic degree n (C(n+1) ⊗ A^{⊗(n+1)})".to_string(),
        "the module A in BD(A, 0, A) is A acting on itself (adjoint for Lie), so the relative side computes Tor^{U(A)}(M, A); \
         operadic homology is Tor^{U(A)}(M, Ω_A) for the module of Kähler differentials"
            .to_string(),
    ];
    notes.extend(rel_h.notes.iter().cloned());
    Ok(KoszulComparison {
        kind: a.kind,
        degree_shift: 0,
        homology: pair(rel_h.totals(), op_h, rel_h.certified_degrees),
        cohomology: pair(rel_c.totals(), op_c, rel_c.certified_degrees),
        koszulness,
        notes,
    })
}

#[cfg(test)]
mod tests;
