use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::exactalg::{ChainComplex, Direction, Scalar, SparseMatrix};
use crate::koszul_machine::{koszulness_certificate, KoszulnessReport};
use crate::operad_core::{classical_presentation, ClassicalOperad};
use crate::palgebra::{check_algebra, validate_module, PAlgebra, PModule};
use crate::Error;

use super::{chain_complex, cochain_complex, DEGREE_SHIFT};

fn increasing_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let start = t.last().map_or(0, |&x| x + 1);
            for i in start..dim {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn all_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

/// Sorts a wedge monomial; `None` if it has a repeated factor, otherwise the sorted monomial and
/// whether the sorting permutation is odd.
fn sort_wedge(mut v: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

fn index_of(tuples: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()
}

fn require(a: &PAlgebra<impl Scalar>, kind: ClassicalOperad) -> Result<(), Error> {
    check_algebra(a)?;
    if a.kind != kind {
        return Err(Error::Invalid(format!("expected a {} algebra, got {}", kind.name(), a.kind.name())));
    }
    Ok(())
}

/// `Λ^k 𝔤` in degree `k` for `1 ≤ k ≤ k_max`, trivial coefficients.
pub fn chevalley_eilenberg_chains<F: Scalar>(g: &PAlgebra<F>, k_max: usize) -> Result<ChainComplex<F>, Error> {
    require(g, ClassicalOperad::Lie)?;
    let d = g.dim();
    let bases: Vec<Vec<Vec<usize>>> = (0..=k_max).map(|k| increasing_tuples(d, k)).collect();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in 1..=k_max {
        dims.insert(k as i64, bases[k].len());
        if k < 2 {
            continue;
        }
        let target = index_of(&bases[k - 1]);
        let mut entries = Vec::new();
        for (col, t) in bases[k].iter().enumerate() {
            for p in 0..k {
                for q in p + 1..k {
                    let rest: Vec<usize> = (0..k).filter(|&i| i != p && i != q).map(|i| t[i]).collect();
                    for (z, c) in g.mul(t[p], t[q]) {
                        let mut mono = vec![z];
                        mono.extend_from_slice(&rest);
                        if let Some((m, odd)) = sort_wedge(mono) {
                            entries.push((target[&m], col, F::sign(odd ^ ((p + q) % 2 == 1)) * c));
                        }
                    }
                }
            }
        }
        diffs.insert(k as i64, SparseMatrix::from_triplets(bases[k - 1].len(), bases[k].len(), entries));
    }
    ChainComplex::new(Direction::Chain, dims, diffs)
}

/// `Hom(Λ^k 𝔤, M)` in degree `k` for `1 ≤ k ≤ k_max`. Basis vector `(i, m)` sits at
/// `i·dim M + m`.
pub fn chevalley_eilenberg_cochains<F: Scalar>(g: &PAlgebra<F>, m: &PModule<F>, k_max: usize) -> Result<ChainComplex<F>, Error> {
    require(g, ClassicalOperad::Lie)?;
    if let Some(p) = validate_module(g, m).first() {
        return Err(Error::Invalid(format!("module does not match the algebra: {}", p)));
    }
    let d = g.dim();
    let md = m.dim();
    let bases: Vec<Vec<Vec<usize>>> = (0..=k_max + 1).map(|k| increasing_tuples(d, k)).collect();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in 1..=k_max {
        dims.insert(k as i64, bases[k].len() * md);
        if k == k_max {
            continue;
        }
        let source = index_of(&bases[k]);
        let mut entries = Vec::new();
        for (row, t) in bases[k + 1].iter().enumerate() {
            for i in 0..=k {
                let rest: Vec<usize> = (0..=k).filter(|&x| x != i).map(|x| t[x]).collect();
                let s = source[&rest];
                for (r, c, x) in m.actions[t[i]].entries() {
                    entries.push((row * md + r, s * md + c, F::sign(i % 2 == 1) * x.clone()));
                }
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let rest: Vec<usize> = (0..=k).filter(|&x| x != i && x != j).map(|x| t[x]).collect();
                    for (z, c) in g.mul(t[i], t[j]) {
                        let mut mono = vec![z];
                        mono.extend_from_slice(&rest);
                        if let Some((mono, odd)) = sort_wedge(mono) {
                            let s = source[&mono];
                            let coef = F::sign(odd ^ ((i + j) % 2 == 1)) * c;
                            for mm in 0..md {
                                entries.push((row * md + mm, s * md + mm, coef.clone()));
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(k as i64, SparseMatrix::from_triplets(bases[k + 1].len() * md, bases[k].len() * md, entries));
    }
    ChainComplex::new(Direction::Cochain, dims, diffs)
}

fn tuple_index(t: &[usize], d: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * d + x)
}

/// `A^{⊗k}` in degree `k` for `1 ≤ k ≤ k_max`, differential the alternating sum of the inner faces.
pub fn hochschild_chains<F: Scalar>(a: &PAlgebra<F>, k_max: usize) -> Result<ChainComplex<F>, Error> {
    require(a, ClassicalOperad::Asc)?;
    let d = a.dim();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in 1..=k_max {
        let basis = all_tuples(d, k);
        dims.insert(k as i64, basis.len());
        if k < 2 {
            continue;
        }
        let mut entries = Vec::new();
        for (col, t) in basis.iter().enumerate() {
            for i in 0..k - 1 {
                for (z, c) in a.mul(t[i], t[i + 1]) {
                    let mut u = t[..i].to_vec();
                    u.push(z);
                    u.extend_from_slice(&t[i + 2..]);
                    entries.push((tuple_index(&u, d), col, F::sign(i % 2 == 1) * c));
                }
            }
        }
        diffs.insert(k as i64, SparseMatrix::from_triplets(d.pow(k as u32 - 1), basis.len(), entries));
    }
    ChainComplex::new(Direction::Chain, dims, diffs)
}

/// `Hom(A^{⊗k}, M)` in degree `k` for `1 ≤ k ≤ k_max` with the Hochschild differential.
pub fn hochschild_cochains<F: Scalar>(a: &PAlgebra<F>, m: &PModule<F>, k_max: usize) -> Result<ChainComplex<F>, Error> {
    require(a, ClassicalOperad::Asc)?;
    if let Some(p) = validate_module(a, m).first() {
        return Err(Error::Invalid(format!("module does not match the algebra: {}", p)));
    }
    let d = a.dim();
    let md = m.dim();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in 1..=k_max {
        dims.insert(k as i64, d.pow(k as u32) * md);
        if k == k_max {
            continue;
        }
        let mut entries = Vec::new();
        for (row, t) in all_tuples(d, k + 1).iter().enumerate() {
            let first = tuple_index(&t[1..], d);
            for (r, c, x) in m.actions[t[0]].entries() {
                entries.push((row * md + r, first * md + c, x.clone()));
            }
            let last = tuple_index(&t[..k], d);
            for (r, c, x) in m.actions[d + t[k]].entries() {
                entries.push((row * md + r, last * md + c, F::sign((k + 1) % 2 == 1) * x.clone()));
            }
            for i in 0..k {
                for (z, c) in a.mul(t[i], t[i + 1]) {
                    let mut u = t[..i].to_vec();
                    u.push(z);
                    u.extend_from_slice(&t[i + 2..]);
                    let s = tuple_index(&u, d);
                    let coef = F::sign(i % 2 == 0) * c;
                    for mm in 0..md {
                        entries.push((row * md + mm, s * md + mm, coef.clone()));
                    }
                }
            }
        }
        diffs.insert(k as i64, SparseMatrix::from_triplets(d.pow(k as u32 + 1) * md, d.pow(k as u32) * md, entries));
    }
    ChainComplex::new(Direction::Cochain, dims, diffs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub operadic_degree: i64,
    pub classical_degree: i64,
    pub operadic: usize,
    pub classical: usize,
}

impl DegreeComparison {
    pub fn agrees(&self) -> bool {
        self.operadic == self.classical
    }
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub kind: ClassicalOperad,
    /// `n_classical = n_operadic + degree_shift`.
    pub degree_shift: i64,
    pub homology: Vec<DegreeComparison>,
    pub cohomology: Vec<DegreeComparison>,
    /// Koszulness of the operad up to the largest arity the complexes use.
    pub koszulness: KoszulnessReport,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.homology.iter().chain(&self.cohomology).all(DegreeComparison::agrees)
    }
}

pub(crate) fn certificate<F: Scalar>(kind: ClassicalOperad, max_arity: usize) -> Result<KoszulnessReport, Error> {
    type Key = (ClassicalOperad, usize, u64);
    static REPORTS: OnceLock<Mutex<HashMap<Key, KoszulnessReport>>> = OnceLock::new();
    let key = (kind, max_arity, F::characteristic());
    if let Some(r) = REPORTS.get_or_init(Default::default).lock().expect("report cache").get(&key) {
        return Ok(r.clone());
    }
    let report = koszulness_certificate(&classical_presentation::<F>(kind), max_arity)?;
    REPORTS.get_or_init(Default::default).lock().expect("report cache").insert(key, report.clone());
    Ok(report)
}

/// Compares the operadic (co)homology in degrees below `n_max` with the textbook complex.
pub fn classical_cross_check<F: Scalar>(a: &PAlgebra<F>, m: &PModule<F>, n_max: usize) -> Result<CrossCheck, Error> {
    let k_max = n_max + DEGREE_SHIFT as usize;
    let (chains, cochains) = match a.kind {
        ClassicalOperad::Lie => (chevalley_eilenberg_chains(a, k_max)?, chevalley_eilenberg_cochains(a, m, k_max)?),
        ClassicalOperad::Asc => (hochschild_chains(a, k_max)?, hochschild_cochains(a, m, k_max)?),
        ClassicalOperad::Com => return Err(Error::Invalid("no classical complex is implemented for commutative algebras".into())),
    };
    let operadic_chains = chain_complex(a, n_max)?;
    let operadic_cochains = cochain_complex(a, m, n_max)?;
    let compare = |operadic: BTreeMap<i64, usize>, classical: &ChainComplex<F>| -> Vec<DegreeComparison> {
        operadic
            .into_iter()
            .map(|(n, dim)| DegreeComparison {
                operadic_degree: n,
                classical_degree: n + DEGREE_SHIFT,
                operadic: dim,
                classical: classical.homology_at(n + DEGREE_SHIFT).0,
            })
            .collect()
    };
    let koszulness = certificate::<F>(a.kind, (n_max + 2).max(3))?;
    Ok(CrossCheck {
        kind: a.kind,
        degree_shift: DEGREE_SHIFT,
        homology: compare(operadic_chains.homology(), &chains),
        cohomology: compare(operadic_cochains.cohomology(), &cochains),
        koszulness,
    })
}
