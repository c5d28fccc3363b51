use std::collections::{BTreeMap, HashMap};

use crate::exactalg::{ChainComplex, Direction, SVec, Scalar, SparseMatrix};
use crate::operad_core::ClassicalOperad;
use crate::palgebra::{regular_module, validate_module, PModule};
use crate::relhom::engine::{adapt, clean, Cosets, Element, Tower, Truncation};
use crate::relhom::{relative_cells, Level, RightModule};
use crate::symcore::Coinvariants;
use crate::Error;

use super::structure::{validate_semiinfinite, SemiInfiniteStructure};

pub const HOM_ACTION_CONVENTION: &str = "right U(A)-action on Hom(BD(A,B,A), M) by precomposition with right multiplication on the \
     outermost U(A) factor; for U(A)-linear maps this is φ·u = u_M ∘ φ, defined only when U(A) acts on M through a commutative quotient";

/// One weight of `Hom(BD(A,B,A), M) ⊗_{U(A)} BD(A,N,A)` with both bars normalized, in total
/// degrees `n₋ ≤ q − p ≤ n₊` (`p` the cohomological B-level, `q` the homological N-level).
#[derive(Clone, Debug)]
pub struct SemiInfiniteComplex<F: Scalar> {
    pub weight: i64,
    pub window: (i64, i64),
    /// `(p, q)` → dimension after the `U(N)`-balancing quotient.
    pub cells: BTreeMap<(usize, usize), usize>,
    pub complex: ChainComplex<F>,
    /// How the N-side bar was made finite.
    pub truncation: Truncation,
    pub notes: Vec<String>,
}

impl<F: Scalar> SemiInfiniteComplex<F> {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        (self.window.0..=self.window.1).map(|n| (n, self.complex.dim(n))).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    /// Whether the finite complex is all of this weight (true unless the N-side needed a PBW cut).
    pub fn complete(&self) -> bool {
        !matches!(self.truncation, Truncation::PbwLength(_))
    }
}

#[derive(Clone, Debug)]
pub struct SemiInfiniteHomology {
    pub weight: i64,
    pub window: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    /// Degrees whose value depends on the window edge or the truncation.
    pub unverified: Vec<i64>,
    pub notes: Vec<String>,
}

fn commutative_action<F: Scalar>(m: &PModule<F>) -> Option<String> {
    for i in 0..m.actions.len() {
        for j in 0..i {
            if m.actions[i].mul(&m.actions[j]) != m.actions[j].mul(&m.actions[i]) {
                return Some(format!("generators {} and {} act on M without commuting", j, i));
            }
        }
    }
    None
}

/// Weight `v` component of the B-side at one level: the quotient `Q = M* ⊗_{U(B)} T^p(A)`, whose
/// dual is the Hom space.
struct BSide<F: Scalar> {
    levels: BTreeMap<i64, Vec<Level<F>>>,
    complexes: BTreeMap<i64, ChainComplex<F>>,
    /// Right action of the N-side adapted generators on `M*`, by columns.
    ops: Vec<Vec<SVec<F>>>,
    weights: Vec<i64>,
    memo: HashMap<(usize, i64, usize), Vec<SVec<F>>>,
}

impl<F: Scalar> BSide<F> {
    fn dim(&self, p: usize, v: i64) -> usize {
        self.levels.get(&v).and_then(|l| l.get(p)).map_or(0, |l| l.quotient.dim())
    }

    /// `φ_j · g` for the dual basis of level `p`, weight `v`: coefficients on the dual basis at `v − wt(g)`.
    fn act(&mut self, p: usize, v: i64, g: usize) -> Vec<SVec<F>> {
        if let Some(r) = self.memo.get(&(p, v, g)) {
            return r.clone();
        }
        let src_v = v - self.weights[g];
        let rows = self.dim(p, v);
        let mut out = vec![Vec::new(); rows];
        if rows > 0 && self.dim(p, src_v) > 0 {
            let src = &self.levels[&src_v][p];
            let tgt = &self.levels[&v][p];
            for (i, &b) in src.quotient.basis.iter().enumerate() {
                let key = &src.keys[b];
                let mut v: SVec<F> = self.ops[g][key[0]]
                    .iter()
                    .map(|(mi, c)| {
                        let mut k = key.clone();
                        k[0] = *mi;
                        (*tgt.index.get(&k).unwrap_or_else(|| panic!("M* action left the computed range at {:?}", k)), c.clone())
                    })
                    .collect();
                v.sort_by_key(|e| e.0);
                for (j, c) in tgt.quotient.projection.apply(&v) {
                    out[j].push((i, c));
                }
            }
        }
        self.memo.insert((p, v, g), out.clone());
        out
    }

    /// `δφ_j` at level `p`, weight `v`, on the dual basis of level `p + 1`.
    fn delta(&self, p: usize, v: i64, j: usize) -> SVec<F> {
        match self.complexes.get(&v) {
            Some(c) if c.dim(p as i64 + 1) > 0 => c.differential(p as i64 + 1).row(j).to_vec(),
            _ => Vec::new(),
        }
    }
}

fn is_degenerate(key: &[usize]) -> bool {
    key[..key.len() - 1].contains(&0)
}

/// Pair basis of one cell before the balancing quotient.
struct Cell<F: Scalar> {
    pairs: Vec<(i64, usize, Vec<usize>)>,
    index: HashMap<(i64, usize, Vec<usize>), usize>,
    quotient: Coinvariants<F>,
}

pub fn semiinfinite_complex<F: Scalar>(
    s: &SemiInfiniteStructure<F>,
    m: &PModule<F>,
    weight: i64,
    window: (i64, i64),
    bound: i64,
) -> Result<SemiInfiniteComplex<F>, Error> {
    let (lo, hi) = window;
    if lo > 0 || hi < 0 {
        return Err(Error::Config(format!("window [{}, {}] must contain 0", lo, hi)));
    }
    let cert = validate_semiinfinite(s, bound);
    if let Some(v) = cert.first_violation() {
        return Err(Error::Invalid(format!(
            "not a semi-infinite structure: condition ({}) fails: {}",
            v.index,
            v.witness.clone().unwrap_or_default()
        )));
    }
    let a = &s.algebra;
    if a.kind != ClassicalOperad::Lie {
        return Err(Error::Config(format!("the semi-infinite complex is implemented for Lie algebras (got {})", a.kind)));
    }
    if let Some(p) = validate_module(a, m).first() {
        return Err(Error::Invalid(format!("module does not match the algebra: {}", p)));
    }
    if m.bound.is_some() {
        return Err(Error::Invalid("the semi-infinite complex needs an untruncated module".into()));
    }
    if let Some(why) = commutative_action(m) {
        return Err(Error::Config(format!("{}; {}", why, HOM_ACTION_CONVENTION)));
    }
    let ext = |ws: &[i64]| (ws.iter().copied().min().unwrap_or(0), ws.iter().copied().max().unwrap_or(0));
    let (min_a, max_a) = ext(&a.weights);
    let (_, max_m) = ext(&m.weights);
    let max_gen = a.weights.iter().map(|w| w.abs()).max().unwrap_or(0);
    let min_n = s.complement.source.weights.iter().copied().min().unwrap_or(1).max(1);
    let base_weights = &s.base.source.weights;
    let strict_base = base_weights.iter().all(|&w| w < 0);
    let min_b = base_weights.iter().map(|w| -w).min().unwrap_or(1).max(1);
    // Nondegenerate tuples: every B-side letter adds ≥ min_n, every N-side letter removes ≥ min_b.
    let slack = (max_m - min_a + max_a - weight).max(0);
    let p_max = (slack / min_n) as usize;
    let pbw_len = bound.max(1) as usize;
    let q_max = if strict_base { (slack / min_b) as usize } else { pbw_len };
    let mut cells_pq: Vec<(usize, usize)> = Vec::new();
    for p in 0..=p_max {
        for q in 0..=q_max {
            let n = q as i64 - p as i64;
            if n >= lo && n <= hi {
                cells_pq.push((p, q));
            }
        }
    }
    let top_p = cells_pq.iter().map(|c| c.0).max().unwrap_or(0);
    let top_q = cells_pq.iter().map(|c| c.1).max().unwrap_or(0);

    // B-side: normalized M* ⊗_{U(B)} T^p(A), dualized.
    let m_star = RightModule::dual_of(m);
    let b_bound = (min_a - max_m).abs().max((max_a - weight).abs()) + max_gen;
    let rel = relative_cells(&s.base, &m_star, top_p, b_bound, true)?;
    let mut levels = BTreeMap::new();
    let mut complexes = BTreeMap::new();
    for (v, (l, c)) in rel.components {
        levels.insert(v, l);
        complexes.insert(v, c);
    }

    // N-side: normalized T^q(A) over U(N).
    let cosets = Cosets::new(&s.complement)?;
    let split = cosets.split();
    let gen_weights = cosets.generator_weights.clone();
    let ops: Vec<Vec<SVec<F>>> = adapt(&cosets.change, &m_star.actions).iter().map(|o| o.columns()).collect();
    let truncation = if strict_base {
        Truncation::Weight((weight + min_a - max_m).abs().max(max_a.abs()) + max_gen)
    } else {
        Truncation::PbwLength(pbw_len)
    };
    let x = regular_module(a);
    let mut tower = Tower::new(cosets, &x.actions, x.weights.clone(), x.names.clone());
    let y_keys: Vec<BTreeMap<i64, Vec<Vec<usize>>>> = (0..=top_q)
        .map(|q| {
            let mut by = tower.level_keys(q, truncation, 0);
            for v in by.values_mut() {
                v.retain(|k| !is_degenerate(k));
            }
            by
        })
        .collect();
    let mut b = BSide { levels, complexes, ops, weights: gen_weights.clone(), memo: HashMap::new() };
    let empty = Vec::new();
    let b_weights: Vec<i64> = b.levels.keys().copied().collect();

    let lookup = |index: &HashMap<(i64, usize, Vec<usize>), usize>, key: (i64, usize, Vec<usize>)| -> Result<usize, Error> {
        index.get(&key).copied().ok_or_else(|| Error::Config(format!("balancing relation left the truncation at {:?}", key)))
    };

    let mut cells: HashMap<(usize, usize), Cell<F>> = HashMap::new();
    for &(p, q) in &cells_pq {
        let mut pairs = Vec::new();
        for &v in &b_weights {
            for j in 0..b.dim(p, v) {
                for y in y_keys[q].get(&(weight + v)).unwrap_or(&empty) {
                    pairs.push((v, j, y.clone()));
                }
            }
        }
        let index: HashMap<(i64, usize, Vec<usize>), usize> = pairs.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        // (φ·ν) ⊗ y − φ ⊗ ν·y for the generators ν of N.
        let mut rels = Vec::new();
        for nu in split..gen_weights.len() {
            let wn = gen_weights[nu];
            for &v in &b_weights {
                let rows = b.act(p, v, nu);
                for (j, row) in rows.iter().enumerate() {
                    for y in y_keys[q].get(&(weight + v - wn)).unwrap_or(&empty) {
                        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
                        for (i, c) in row {
                            let k = lookup(&index, (v - wn, *i, y.clone()))?;
                            *acc.entry(k).or_insert_with(F::zero) += c.clone();
                        }
                        for (y2, c) in tower.act(nu, y) {
                            if is_degenerate(&y2) {
                                continue;
                            }
                            let k = lookup(&index, (v, j, y2))?;
                            *acc.entry(k).or_insert_with(F::zero) -= c;
                        }
                        rels.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect::<SVec<F>>());
                    }
                }
            }
        }
        let quotient = Coinvariants::from_relations(pairs.len(), rels.into_iter());
        cells.insert((p, q), Cell { pairs, index, quotient });
    }

    // Total complex in degrees lo..=hi.
    let mut dims = BTreeMap::new();
    let mut offsets: HashMap<(usize, usize), usize> = HashMap::new();
    let mut by_degree: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for &(p, q) in &cells_pq {
        by_degree.entry(q as i64 - p as i64).or_default().push((p, q));
    }
    for n in lo..=hi {
        let mut off = 0;
        for c in by_degree.get(&n).unwrap_or(&Vec::new()) {
            offsets.insert(*c, off);
            off += cells[c].quotient.dim();
        }
        dims.insert(n, off);
    }
    let mut diffs = BTreeMap::new();
    for n in (lo + 1)..=hi {
        let mut cols: Vec<SVec<F>> = Vec::new();
        for &(p, q) in by_degree.get(&n).unwrap_or(&Vec::new()) {
            let cell = &cells[&(p, q)];
            for &bi in &cell.quotient.basis {
                let (v, j, y) = cell.pairs[bi].clone();
                let mut col: BTreeMap<usize, F> = BTreeMap::new();
                if let Some(t) = cells.get(&(p + 1, q)) {
                    let mut e = Vec::new();
                    for (i, c) in b.delta(p, v, j) {
                        e.push((lookup(&t.index, (v, i, y.clone()))?, c));
                    }
                    e.sort_by_key(|x| x.0);
                    for (r, c) in t.quotient.projection.apply(&e) {
                        *col.entry(offsets[&(p + 1, q)] + r).or_insert_with(F::zero) += c;
                    }
                }
                if q > 0 {
                    if let Some(t) = cells.get(&(p, q - 1)) {
                        let sign = F::sign(p % 2 == 1);
                        let mut acc: BTreeMap<(i64, usize, Vec<usize>), F> = BTreeMap::new();
                        // ∂_0: the first representative acts on φ from the right.
                        let mut phi: BTreeMap<(i64, usize), F> = [((v, j), F::one())].into();
                        for g in tower.cosets.word(y[0]) {
                            let mut next: BTreeMap<(i64, usize), F> = BTreeMap::new();
                            for ((v1, j1), c) in phi {
                                for (i, d) in &b.act(p, v1, g)[j1] {
                                    *next.entry((v1 - gen_weights[g], *i)).or_insert_with(F::zero) += c.clone() * d.clone();
                                }
                            }
                            phi = next;
                        }
                        for ((v1, i), c) in phi {
                            *acc.entry((v1, i, y[1..].to_vec())).or_insert_with(F::zero) += c;
                        }
                        for i in 1..=q {
                            let s = F::sign(i % 2 == 1);
                            let face: Element<F> = tower.face(i - 1, &y);
                            for (y2, c) in clean(face) {
                                if !is_degenerate(&y2) {
                                    *acc.entry((v, j, y2)).or_insert_with(F::zero) += s.clone() * c;
                                }
                            }
                        }
                        let mut e = Vec::new();
                        for (k, c) in acc {
                            if !c.is_zero() {
                                e.push((lookup(&t.index, k)?, c));
                            }
                        }
                        e.sort_by_key(|x| x.0);
                        for (r, c) in t.quotient.projection.apply(&e) {
                            *col.entry(offsets[&(p, q - 1)] + r).or_insert_with(F::zero) += sign.clone() * c;
                        }
                    }
                }
                cols.push(col.into_iter().filter(|(_, c)| !c.is_zero()).collect());
            }
        }
        diffs.insert(n, SparseMatrix::from_columns(dims[&(n - 1)], &cols));
    }
    let complex = ChainComplex::new(Direction::Chain, dims, diffs)?;
    let mut notes = vec![
        HOM_ACTION_CONVENTION.to_string(),
        "both bar objects normalized; total degree q − p with p the B-side cochain level and q the N-side chain level".to_string(),
        "differential δ ⊗ 1 + (−1)^p 1 ⊗ d".to_string(),
    ];
    if let Truncation::PbwLength(l) = truncation {
        notes.push(format!(
            "B has weight-zero elements, so N-side weight components are infinite; the N-side bar is cut to total PBW length ≤ {} (a subcomplex, not certified)",
            l
        ));
    }
    Ok(SemiInfiniteComplex {
        weight,
        window,
        cells: cells_pq.iter().map(|c| (*c, cells[c].quotient.dim())).collect(),
        complex,
        truncation,
        notes,
    })
}

/// Homology of the semi-infinite complex; the two window edges and, under a PBW cut, every degree
/// are flagged unverified.
pub fn semiinfinite_homology<F: Scalar>(
    s: &SemiInfiniteStructure<F>,
    m: &PModule<F>,
    weight: i64,
    window: (i64, i64),
    bound: i64,
) -> Result<SemiInfiniteHomology, Error> {
    let c = semiinfinite_complex(s, m, weight, window, bound)?;
    let dims: BTreeMap<i64, usize> = (window.0..=window.1).map(|n| (n, c.complex.betti(n))).collect();
    let unverified = if c.complete() { vec![window.0, window.1] } else { dims.keys().copied().collect() };
    Ok(SemiInfiniteHomology { weight, window, dims, unverified, notes: c.notes })
}
