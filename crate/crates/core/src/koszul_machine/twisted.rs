use crate::exactalg::{ChainComplex, Direction, SVec, Scalar};
use crate::operad_core::tree::set_partitions;
use crate::operad_core::{subsets, CompositeBasis, TruncatedCooperad, TruncatedOperad};
use crate::symcore::koszul_sign;
use crate::Error;

use super::convolution::{Convolution, ConvolutionElement, TwistingMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `P ∘_α C`
    Left,
    /// `C ∘_α P`
    Right,
}

/// Twisted composite product in one arity, together with its basis.
pub struct TwistedComposite<F: Scalar> {
    pub basis: CompositeBasis<F>,
    pub complex: ChainComplex<F>,
    /// `(degree, position)` of each basis vector inside the complex.
    pub placement: Vec<(i64, usize)>,
}

fn sign<F: Scalar>(odd: bool) -> F {
    if odd {
        -F::one()
    } else {
        F::one()
    }
}

/// Full composition `x(y_0, …, y_{k−1})`, composing left to right; returns the vector and the
/// concatenated labels.
fn full_composition<F: Scalar>(p: &TruncatedOperad<F>, x: &[(usize, F)], xs: usize, ys: &[(usize, SVec<F>, Vec<usize>)]) -> SVec<F> {
    let mut acc = x.to_vec();
    let mut arity = xs;
    let mut offset = 0;
    for (a, y, _) in ys {
        acc = p.compose(arity, offset, &acc, *a, y);
        arity += a - 1;
        offset += a;
    }
    acc
}

pub fn twisted_composite<F: Scalar>(
    c: &TruncatedCooperad<F>,
    p: &TruncatedOperad<F>,
    alpha: &TwistingMorphism<F>,
    side: Side,
    n: usize,
) -> Result<TwistedComposite<F>, Error> {
    let conv = Convolution::new(c, p)?;
    conv.validate(&alpha.alpha)?;
    if !conv.maurer_cartan(&alpha.alpha)?.is_zero() {
        return Err(Error::Invalid("twisting morphism fails the Maurer–Cartan equation".into()));
    }
    let al: Vec<Vec<SVec<F>>> = alpha.alpha.maps.iter().map(|m| m.columns()).collect();
    let basis = match side {
        Side::Right => CompositeBasis::new(&c.carrier, &p.carrier, n),
        Side::Left => CompositeBasis::new(&p.carrier, &c.carrier, n),
    };
    let mut op: Vec<SVec<F>> = Vec::with_capacity(basis.dim());
    for idx in 0..basis.dim() {
        let col = match side {
            Side::Right => right_differential(c, p, &al, &alpha.alpha, &basis, idx),
            Side::Left => left_differential(c, p, &al, &alpha.alpha, &basis, idx),
        };
        op.push(col);
    }
    let degrees: Vec<i64> = (0..basis.dim()).map(|i| basis.degree(i)).collect();
    let (complex, placement) = ChainComplex::from_graded_operator(Direction::Chain, &degrees, &op)?;
    Ok(TwistedComposite { basis, complex, placement })
}

fn right_differential<F: Scalar>(
    c: &TruncatedCooperad<F>,
    p: &TruncatedOperad<F>,
    al: &[Vec<SVec<F>>],
    alpha: &ConvolutionElement<F>,
    basis: &CompositeBasis<F>,
    idx: usize,
) -> SVec<F> {
    let key = &basis.keys[idx];
    let k = key.top_arity;
    let pdeg: Vec<i64> = key.children.iter().zip(&key.blocks).map(|(x, b)| p.degree(b.len(), *x)).collect();
    let mut out: SVec<F> = Vec::new();
    let unit_children = |j: usize| (vec![(key.children[j], F::one())], key.blocks[j].clone());
    // Internal differentials.
    if let Some(dc) = &c.differential {
        let img = dc[k].apply(&[(key.top, F::one())]);
        let kids: Vec<(SVec<F>, Vec<usize>)> = (0..k).map(unit_children).collect();
        out = crate::exactalg::svec_add(&out, &F::one(), &basis.element(k, &img, &kids));
    }
    if let Some(dp) = &p.differential {
        let mut before = c.degree(k, key.top);
        for j in 0..k {
            let a = key.blocks[j].len();
            let img = dp[a].apply(&[(key.children[j], F::one())]);
            let mut kids: Vec<(SVec<F>, Vec<usize>)> = (0..k).map(unit_children).collect();
            kids[j].0 = img;
            out = crate::exactalg::svec_add(&out, &sign(before.rem_euclid(2) == 1), &basis.element(k, &[(key.top, F::one())], &kids));
            before += pdeg[j];
        }
    }
    for subset in subsets(k) {
        let s = subset.len();
        let r = k + 1 - s;
        let i = subset[0];
        let (labels, dec) = c.decompose_subset(k, &[(key.top, F::one())], &subset);
        let ds = c.dim(s);
        for (ix, x) in dec {
            let (a, b) = (ix / ds, ix % ds);
            let ab = &al[s][b];
            if ab.is_empty() {
                continue;
            }
            // Factors: a, α(b), p_0 … p_{k−1}; target order follows the slots of a.
            let adeg = c.degree(r, a);
            let mut degrees = vec![adeg, c.degree(s, b) + alpha.degree];
            degrees.extend(pdeg.iter().copied());
            let mut order = vec![0];
            for q in 0..r {
                if q == i {
                    order.push(1);
                    order.extend(subset.iter().map(|&j| j + 2));
                } else {
                    let slot = if q < i { labels[q] } else { labels[q + s - 1] };
                    order.push(slot + 2);
                }
            }
            let odd = koszul_sign(&degrees, &order) ^ ((adeg * alpha.degree).rem_euclid(2) == 1);
            let ys: Vec<(usize, SVec<F>, Vec<usize>)> = subset
                .iter()
                .map(|&j| (key.blocks[j].len(), vec![(key.children[j], F::one())], key.blocks[j].clone()))
                .collect();
            let merged = full_composition(p, ab, s, &ys);
            let merged_labels: Vec<usize> = ys.iter().flat_map(|y| y.2.iter().copied()).collect();
            let mut kids: Vec<(SVec<F>, Vec<usize>)> = Vec::with_capacity(r);
            for q in 0..r {
                if q == i {
                    kids.push((merged.clone(), merged_labels.clone()));
                } else {
                    let slot = if q < i { labels[q] } else { labels[q + s - 1] };
                    kids.push(unit_children(slot));
                }
            }
            let coef = if odd { -x } else { x };
            out = crate::exactalg::svec_add(&out, &coef, &basis.element(r, &[(a, F::one())], &kids));
        }
    }
    out
}

fn left_differential<F: Scalar>(
    c: &TruncatedCooperad<F>,
    p: &TruncatedOperad<F>,
    al: &[Vec<SVec<F>>],
    alpha: &ConvolutionElement<F>,
    basis: &CompositeBasis<F>,
    idx: usize,
) -> SVec<F> {
    let key = &basis.keys[idx];
    let k = key.top_arity;
    let pd = p.degree(k, key.top);
    let cdeg: Vec<i64> = key.children.iter().zip(&key.blocks).map(|(x, b)| c.degree(b.len(), *x)).collect();
    let mut out: SVec<F> = Vec::new();
    let unit_children = |j: usize| (vec![(key.children[j], F::one())], key.blocks[j].clone());
    if let Some(dp) = &p.differential {
        let img = dp[k].apply(&[(key.top, F::one())]);
        let kids: Vec<(SVec<F>, Vec<usize>)> = (0..k).map(unit_children).collect();
        out = crate::exactalg::svec_add(&out, &F::one(), &basis.element(k, &img, &kids));
    }
    if let Some(dc) = &c.differential {
        let mut before = pd;
        for j in 0..k {
            let a = key.blocks[j].len();
            let img = dc[a].apply(&[(key.children[j], F::one())]);
            let mut kids: Vec<(SVec<F>, Vec<usize>)> = (0..k).map(unit_children).collect();
            kids[j].0 = img;
            out = crate::exactalg::svec_add(&out, &sign(before.rem_euclid(2) == 1), &basis.element(k, &[(key.top, F::one())], &kids));
            before += cdeg[j];
        }
    }
    for j in 0..k {
        let block = &key.blocks[j];
        let m = block.len();
        let before: i64 = cdeg[..j].iter().sum();
        for r in 2..=m {
            if al[r].iter().all(|v| v.is_empty()) {
                continue;
            }
            for parts in set_partitions(&(0..m).collect::<Vec<_>>(), r) {
                for (a, bs, x) in full_decomposition(c, m, key.children[j], &parts) {
                    let aa = &al[r][a];
                    if aa.is_empty() {
                        continue;
                    }
                    let adeg = c.degree(r, a);
                    // Factors: p, c_0 … c_{j−1}, α(a), b_0 … b_{r−1}, c_{j+1} …; α(a) moves next to p.
                    let mut degrees = vec![pd];
                    degrees.extend(cdeg[..j].iter().copied());
                    degrees.push(adeg + alpha.degree);
                    degrees.extend(bs.iter().zip(&parts).map(|(b, part)| c.degree(part.len(), *b)));
                    degrees.extend(cdeg[j + 1..].iter().copied());
                    let mut order = vec![0, j + 1];
                    order.extend(1..=j);
                    order.extend(j + 2..degrees.len());
                    let odd = koszul_sign(&degrees, &order) ^ ((alpha.degree * (pd + before)).rem_euclid(2) == 1);
                    let top = p.compose(k, j, &[(key.top, F::one())], r, aa);
                    let mut kids: Vec<(SVec<F>, Vec<usize>)> = (0..j).map(unit_children).collect();
                    for (b, part) in bs.iter().zip(&parts) {
                        kids.push((vec![(*b, F::one())], part.iter().map(|&t| block[t]).collect()));
                    }
                    kids.extend((j + 1..k).map(unit_children));
                    let coef = if odd { -x } else { x };
                    out = crate::exactalg::svec_add(&out, &coef, &basis.element(k + r - 1, &top, &kids));
                }
            }
        }
    }
    out
}

/// Coefficients of `a ⊗ b_0 ⊗ … ⊗ b_{r−1}` in the full decomposition of the basis vector `x` of
/// `C(m)`, where `b_t` sits on the inputs `parts[t]` (blocks ordered by minimum). Obtained by
/// splitting off one block at a time.
pub fn full_decomposition<F: Scalar>(
    c: &TruncatedCooperad<F>,
    m: usize,
    x: usize,
    parts: &[Vec<usize>],
) -> Vec<(usize, Vec<usize>, F)> {
    // State: top basis index, slot labels of the top, lower pieces so far (peel order), coefficient.
    let mut states: Vec<(usize, Vec<usize>, Vec<usize>, F)> = vec![(x, (0..m).collect(), Vec::new(), F::one())];
    for part in parts {
        let mut next = Vec::new();
        for (top, labels, bs, coef) in states {
            if part.len() == 1 {
                let mut bs2 = bs.clone();
                bs2.push(0);
                next.push((top, labels, bs2, coef));
                continue;
            }
            let arity = labels.len();
            let subset: Vec<usize> = part.iter().map(|l| labels.iter().position(|x| x == l).expect("slot present")).collect();
            let s = subset.len();
            let ds = c.dim(s);
            let (perm, dec) = c.decompose_subset(arity, &[(top, F::one())], &subset);
            let i = subset[0];
            let mut new_labels: Vec<usize> = perm[..i].iter().map(|&q| labels[q]).collect();
            new_labels.push(part[0]);
            new_labels.extend(perm[i + s..].iter().map(|&q| labels[q]));
            for (ix, y) in dec {
                let mut bs2 = bs.clone();
                bs2.push(ix % ds);
                next.push((ix / ds, new_labels.clone(), bs2, coef.clone() * y));
            }
        }
        states = next;
    }
    let r = parts.len();
    states
        .into_iter()
        .map(|(a, _, bs, coef)| {
            // Peeling produced a ⊗ b_{r−1} ⊗ … ⊗ b_0; restore slot order.
            let mut degrees = vec![c.degree(r, a)];
            degrees.extend(bs.iter().zip(parts).rev().map(|(b, p)| c.degree(p.len(), *b)));
            let mut order = vec![0];
            order.extend((1..=r).rev());
            let coef = if koszul_sign(&degrees, &order) { -coef } else { coef };
            (a, bs, coef)
        })
        .collect()
}
