use std::collections::{BTreeMap, HashMap};

use crate::exactalg::{accumulate, Echelon, SVec, Scalar, SparseMatrix};
use crate::operad_core::ClassicalOperad;
use crate::palgebra::{enveloping_algebra, AlgebraMorphism, Enveloping, PAlgebra, Pbw};
use crate::Error;

/// How the infinite levels of a bar object are cut down to finite pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Weight components with `|w| ≤ bound`, each computed exactly.
    Weight(i64),
    /// Total PBW length at most the bound: a subcomplex whose homology is exact in degrees below
    /// the bound (only used over the zero base, where the associated graded is a Koszul algebra).
    PbwLength(usize),
    /// `U(A)` finite-dimensional and the base zero: no truncation at all.
    Exact,
}

impl Truncation {
    /// Highest degree whose homology the truncation computes exactly.
    pub fn certified_below(&self) -> Option<usize> {
        match self {
            Truncation::PbwLength(p) => Some(*p),
            _ => None,
        }
    }
}

enum Reps<F: Scalar> {
    /// Complement PBW monomials in the letters `0..split` of the adapted algebra; the remaining
    /// letters span the image of the base.
    Pbw { pbw: Pbw<F>, split: usize },
    /// Basis of a finite `U(A)` over the zero base, each with a word in the generators.
    Finite { u: Enveloping<F>, words: Vec<Vec<usize>> },
}

/// `U(A)` as a free right `U(B)`-module: coset representatives and the straightening of left
/// multiplication by generators into (representative, word in base generators).
pub struct Cosets<F: Scalar> {
    reps: Reps<F>,
    /// Adapted generators in terms of the generators of `A`, `generators × generators`.
    pub change: SparseMatrix<F>,
    pub generator_weights: Vec<i64>,
    pub generator_names: Vec<String>,
    monos: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    pub base_is_zero: bool,
}

impl<F: Scalar> Cosets<F> {
    pub fn new(f: &AlgebraMorphism<F>) -> Result<Self, Error> {
        let a = &f.target;
        let b = &f.source;
        if !f.is_injective() {
            return Err(Error::Invalid("relative constructions need an injective morphism".into()));
        }
        let base_is_zero = b.dim() == 0;
        match a.kind {
            ClassicalOperad::Lie => {
                let images = f.map.columns();
                let mut span = Echelon::new(a.dim());
                for v in &images {
                    span.insert(v.clone());
                }
                let complement: Vec<usize> = (0..a.dim()).filter(|&i| span.insert(vec![(i, F::one())]).is_some()).collect();
                let mut cols: Vec<_> = complement.iter().map(|&i| vec![(i, F::one())]).collect();
                cols.extend(images);
                let change = SparseMatrix::from_columns(a.dim(), &cols);
                let mut weights: Vec<i64> = complement.iter().map(|&i| a.weights[i]).collect();
                weights.extend(&b.weights);
                let mut names: Vec<String> = complement.iter().map(|&i| a.names[i].clone()).collect();
                names.extend(b.names.iter().cloned());
                let mut adapted = a.change_basis(&change, weights.clone())?;
                adapted.names = names.clone();
                let pbw = Pbw::new(&adapted)?;
                let mut c = Cosets {
                    reps: Reps::Pbw { pbw, split: complement.len() },
                    change,
                    generator_weights: weights,
                    generator_names: names,
                    monos: Vec::new(),
                    index: HashMap::new(),
                    base_is_zero,
                };
                c.intern(Vec::new());
                Ok(c)
            }
            ClassicalOperad::Com | ClassicalOperad::Asc => {
                if !base_is_zero {
                    return Err(Error::Config(format!(
                        "relative constructions over a nonzero base are implemented for Lie algebras only (got a {} algebra)",
                        a.kind
                    )));
                }
                let u = enveloping_algebra(a, 1)?;
                let n = a.dim();
                let words: Vec<Vec<usize>> = match a.kind {
                    ClassicalOperad::Com => (0..=n).map(|r| if r == 0 { vec![] } else { vec![r - 1] }).collect(),
                    _ => (0..(n + 1) * (n + 1))
                        .map(|r| {
                            let (p, q) = (r / (n + 1), r % (n + 1));
                            let mut w = Vec::new();
                            if p > 0 {
                                w.push(p - 1);
                            }
                            if q > 0 {
                                w.push(n + q - 1);
                            }
                            w
                        })
                        .collect(),
                };
                let gens = u.generator_count();
                let mut generator_weights = a.weights.clone();
                let mut generator_names = a.names.clone();
                if a.kind == ClassicalOperad::Asc {
                    generator_weights.extend(a.weights.iter().copied());
                    generator_names = a.names.iter().map(|x| format!("{}·", x)).chain(a.names.iter().map(|x| format!("·{}", x))).collect();
                }
                Ok(Cosets {
                    reps: Reps::Finite { u, words },
                    change: SparseMatrix::identity(gens),
                    generator_weights,
                    generator_names,
                    monos: Vec::new(),
                    index: HashMap::new(),
                    base_is_zero,
                })
            }
        }
    }

    fn intern(&mut self, m: Vec<usize>) -> usize {
        if let Some(&i) = self.index.get(&m) {
            return i;
        }
        self.monos.push(m.clone());
        self.index.insert(m, self.monos.len() - 1);
        self.monos.len() - 1
    }

    /// Number of complement letters (Lie) or generators (finite case).
    pub fn split(&self) -> usize {
        match &self.reps {
            Reps::Pbw { split, .. } => *split,
            Reps::Finite { u, .. } => u.generator_count(),
        }
    }

    /// Weights of the complement letters; all of one strict sign makes weight components finite.
    pub fn choose_truncation(&self, weight_bound: i64, length_bound: usize) -> Result<Truncation, Error> {
        match &self.reps {
            Reps::Finite { .. } => Ok(Truncation::Exact),
            Reps::Pbw { split, .. } => {
                let ws = &self.generator_weights[..*split];
                if ws.iter().all(|&w| w > 0) || ws.iter().all(|&w| w < 0) {
                    return Ok(Truncation::Weight(weight_bound));
                }
                if self.base_is_zero {
                    return Ok(Truncation::PbwLength(length_bound));
                }
                let bad = (0..*split)
                    .find(|&i| ws[i] == 0 || ws[i].signum() != ws[0].signum())
                    .expect("some complement weight breaks the sign condition");
                Err(Error::Config(format!(
                    "weight components of U(A)⊗_U(B) are infinite: complement element {} has weight {} while {} has weight {}",
                    self.generator_names[bad], ws[bad], self.generator_names[0], ws[0]
                )))
            }
        }
    }

    pub fn weight(&self, r: usize) -> i64 {
        match &self.reps {
            Reps::Pbw { .. } => self.monos[r].iter().map(|&i| self.generator_weights[i]).sum(),
            Reps::Finite { u, .. } => u.algebra.weights[r],
        }
    }

    pub fn length(&self, r: usize) -> usize {
        match &self.reps {
            Reps::Pbw { .. } => self.monos[r].len(),
            Reps::Finite { u, .. } => u.algebra.filtration[r],
        }
    }

    pub fn name(&self, r: usize) -> String {
        match &self.reps {
            Reps::Pbw { pbw, .. } => pbw.name(&self.monos[r]),
            Reps::Finite { u, .. } => u.algebra.names[r].clone(),
        }
    }

    /// The representative as a product of generators, leftmost first.
    pub fn word(&self, r: usize) -> Vec<usize> {
        match &self.reps {
            Reps::Pbw { .. } => self.monos[r].clone(),
            Reps::Finite { words, .. } => words[r].clone(),
        }
    }

    /// `g · r = Σ c · r' · β` with `β` a word in base generators (adapted indices).
    pub fn left_mul(&mut self, g: usize, r: usize) -> Vec<(usize, Vec<usize>, F)> {
        let terms: Vec<(Vec<usize>, F)> = match &self.reps {
            Reps::Pbw { pbw, .. } => pbw.generator_times(g, &self.monos[r]).into_iter().collect(),
            Reps::Finite { u, .. } => return u.generator_times(g, r).into_iter().map(|(x, c)| (x, Vec::new(), c)).collect(),
        };
        let split = self.split();
        terms
            .into_iter()
            .map(|(m, c)| {
                let k = m.iter().position(|&x| x >= split).unwrap_or(m.len());
                let suffix = m[k..].to_vec();
                (self.intern(m[..k].to_vec()), suffix, c)
            })
            .collect()
    }

    /// Representatives with `|weight| ≤ max_weight` (weight mode) or length at most `max_len`.
    pub fn enumerate(&mut self, truncation: Truncation, max_weight: i64) -> Vec<usize> {
        match &self.reps {
            Reps::Finite { u, .. } => (0..u.algebra.dim()).collect(),
            Reps::Pbw { split, .. } => {
                let split = *split;
                let ws = self.generator_weights[..split].to_vec();
                let mut out = Vec::new();
                let mut stack: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 0)];
                while let Some((m, w)) = stack.pop() {
                    let start = m.last().copied().unwrap_or(0);
                    for i in start..split {
                        let nw = w + ws[i];
                        let keep = match truncation {
                            Truncation::Weight(_) => nw.abs() <= max_weight,
                            Truncation::PbwLength(p) => m.len() < p,
                            Truncation::Exact => false,
                        };
                        if keep {
                            let mut next = m.clone();
                            next.push(i);
                            stack.push((next, nw));
                        }
                    }
                    out.push(self.intern(m));
                }
                out.sort();
                out
            }
        }
    }
}

/// Element of a bar level: keys are `[rep_0, …, rep_k, x]`.
pub type Element<F> = BTreeMap<Vec<usize>, F>;

pub fn add_into<F: Scalar>(acc: &mut Element<F>, key: Vec<usize>, c: F) {
    let entry = acc.entry(key).or_insert_with(F::zero);
    *entry += c;
}

pub fn clean<F: Scalar>(e: Element<F>) -> Element<F> {
    e.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `T^k(X)` for a fixed module `X`: left action of `U(A)`-generators on tuples.
pub struct Tower<F: Scalar> {
    pub cosets: Cosets<F>,
    /// Action of the adapted generators on `X`, by columns.
    pub x_actions: Vec<Vec<SVec<F>>>,
    pub x_weights: Vec<i64>,
    pub x_names: Vec<String>,
    memo: HashMap<(usize, Vec<usize>), Vec<(Vec<usize>, F)>>,
}

/// Operators for the adapted generators from operators for the original ones.
pub fn adapt<F: Scalar>(change: &SparseMatrix<F>, actions: &[SparseMatrix<F>]) -> Vec<SparseMatrix<F>> {
    let dim = actions.first().map_or(0, |a| a.rows());
    change
        .columns()
        .iter()
        .map(|col| col.iter().fold(SparseMatrix::zero(dim, dim), |acc, (i, c)| acc.add_scaled(c, &actions[*i])))
        .collect()
}

impl<F: Scalar> Tower<F> {
    pub fn new(cosets: Cosets<F>, actions: &[SparseMatrix<F>], weights: Vec<i64>, names: Vec<String>) -> Self {
        let x_actions = adapt(&cosets.change, actions).iter().map(|a| a.columns()).collect();
        Tower { cosets, x_actions, x_weights: weights, x_names: names, memo: HashMap::new() }
    }

    pub fn key_name(&self, key: &[usize]) -> String {
        let (x, reps) = key.split_last().expect("nonempty key");
        let mut parts: Vec<String> = reps.iter().map(|&r| self.cosets.name(r)).collect();
        parts.push(self.x_names[*x].clone());
        parts.join("⊗")
    }

    /// Generator `g` acting on the tuple `key`.
    pub fn act(&mut self, g: usize, key: &[usize]) -> Vec<(Vec<usize>, F)> {
        if let Some(v) = self.memo.get(&(g, key.to_vec())) {
            return v.clone();
        }
        let mut out = Element::new();
        if key.len() == 1 {
            for (r, x) in &self.x_actions[g][key[0]] {
                add_into(&mut out, vec![*r], x.clone());
            }
        } else {
            for (r, word, c) in self.cosets.left_mul(g, key[0]) {
                let inner = self.apply_word(&word, &key[1..]);
                for (k, d) in inner {
                    let mut full = vec![r];
                    full.extend(k);
                    add_into(&mut out, full, c.clone() * d);
                }
            }
        }
        let v: Vec<(Vec<usize>, F)> = clean(out).into_iter().collect();
        self.memo.insert((g, key.to_vec()), v.clone());
        v
    }

    /// Product of generators (leftmost first) acting on `key`.
    pub fn apply_word(&mut self, word: &[usize], key: &[usize]) -> Element<F> {
        let mut cur: Element<F> = [(key.to_vec(), F::one())].into();
        for &g in word.iter().rev() {
            let mut next = Element::new();
            for (k, c) in cur {
                for (k2, d) in self.act(g, &k) {
                    add_into(&mut next, k2, c.clone() * d);
                }
            }
            cur = clean(next);
        }
        cur
    }

    /// Face `∂_i` on a level tuple: the representative in slot `i` acts on everything to its right.
    pub fn face(&mut self, i: usize, key: &[usize]) -> Element<F> {
        let word = self.cosets.word(key[i]);
        let tail = self.apply_word(&word, &key[i + 1..]);
        tail.into_iter()
            .map(|(k, c)| {
                let mut full = key[..i].to_vec();
                full.extend(k);
                (full, c)
            })
            .collect()
    }

    /// Degeneracy `σ_i`: a unit representative inserted after slot `i`.
    pub fn degeneracy(&self, i: usize, key: &[usize]) -> Vec<usize> {
        let mut out = key[..=i].to_vec();
        out.push(0);
        out.extend_from_slice(&key[i + 1..]);
        out
    }

    /// All tuples `[rep_0, …, rep_{slots−1}, x]` of the truncation, grouped by weight.
    pub fn level_keys(&mut self, slots: usize, truncation: Truncation, extra: i64) -> BTreeMap<i64, Vec<Vec<usize>>> {
        let xw_max = self.x_weights.iter().map(|w| w.abs()).max().unwrap_or(0);
        let bound = match truncation {
            Truncation::Weight(b) => b + extra + xw_max,
            _ => i64::MAX,
        };
        let reps = self.cosets.enumerate(truncation, bound);
        let info: Vec<(usize, i64, usize)> = reps.iter().map(|&r| (r, self.cosets.weight(r), self.cosets.length(r))).collect();
        let mut partial: Vec<(Vec<usize>, i64, usize)> = vec![(Vec::new(), 0, 0)];
        for _ in 0..slots {
            let mut next = Vec::new();
            for (k, w, l) in &partial {
                for &(r, rw, rl) in &info {
                    let (nw, nl) = (w + rw, l + rl);
                    let keep = match truncation {
                        Truncation::Weight(_) => nw.abs() <= bound,
                        Truncation::PbwLength(p) => nl <= p,
                        Truncation::Exact => true,
                    };
                    if keep {
                        let mut nk = k.clone();
                        nk.push(r);
                        next.push((nk, nw, nl));
                    }
                }
            }
            partial = next;
        }
        let mut out: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        for (k, w, _) in partial {
            for x in 0..self.x_weights.len() {
                let total = w + self.x_weights[x];
                if let Truncation::Weight(b) = truncation {
                    if total.abs() > b + extra {
                        continue;
                    }
                }
                let mut key = k.clone();
                key.push(x);
                out.entry(total).or_default().push(key);
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }
}

/// Right action of a word on a right module given by generator operators, leftmost letter first.
pub fn right_word<F: Scalar>(ops: &[Vec<SVec<F>>], word: &[usize], m: usize) -> Vec<(usize, F)> {
    let mut cur: BTreeMap<usize, F> = [(m, F::one())].into();
    for &g in word {
        let mut next = BTreeMap::new();
        for (i, c) in cur {
            accumulate(&mut next, &c, &ops[g][i]);
        }
        cur = next.into_iter().filter(|(_, c): &(usize, F)| !c.is_zero()).collect();
    }
    cur.into_iter().collect()
}

/// Adapted algebra names for reports.
pub fn describe_base<F: Scalar>(a: &PAlgebra<F>, c: &Cosets<F>) -> String {
    let split = c.split();
    if a.kind != ClassicalOperad::Lie {
        return format!("U({}) over the zero base", a.kind);
    }
    format!(
        "complement {{{}}}, base {{{}}}",
        c.generator_names[..split].join(", "),
        c.generator_names[split..].join(", ")
    )
}
