use std::collections::BTreeMap;

use crate::exactalg::Scalar;
use crate::operad_core::{koszul_dual_cooperad, quotient_presentation, OperadPresentation};
use crate::Error;

use super::barcobar::koszul_inclusion_comparison;
use super::convolution::{koszul_morphism, Convolution, TwistingMorphism};
use super::twisted::{twisted_composite, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityCertificate {
    pub arity: usize,
    pub left_homology: BTreeMap<i64, usize>,
    pub right_homology: BTreeMap<i64, usize>,
    pub left_acyclic: bool,
    pub right_acyclic: bool,
    /// Whether `C ↪ Bar(P)` is a homology isomorphism in this arity.
    pub inclusion_quasi_iso: bool,
}

/// Acyclicity of the Koszul complexes, verified arity by arity up to `max_arity` only.
#[derive(Clone, Debug)]
pub struct KoszulnessReport {
    pub name: String,
    pub max_arity: usize,
    pub arities: Vec<ArityCertificate>,
}

impl KoszulnessReport {
    pub fn verified(&self) -> bool {
        self.arities.iter().all(|a| a.left_acyclic && a.right_acyclic && a.inclusion_quasi_iso)
    }

    /// The conditions agree in every arity.
    pub fn conditions_agree(&self) -> bool {
        self.arities.iter().all(|a| a.left_acyclic == a.right_acyclic && a.right_acyclic == a.inclusion_quasi_iso)
    }
}

fn acyclic(arity: usize, h: &BTreeMap<i64, usize>) -> bool {
    let nonzero: BTreeMap<i64, usize> = h.iter().filter(|x| *x.1 > 0).map(|(k, v)| (*k, *v)).collect();
    if arity == 1 {
        nonzero == BTreeMap::from([(0, 1)])
    } else {
        nonzero.is_empty()
    }
}

pub fn koszulness_certificate<F: Scalar>(pres: &OperadPresentation<F>, max_arity: usize) -> Result<KoszulnessReport, Error> {
    let q = quotient_presentation(pres, max_arity)?;
    let kd = koszul_dual_cooperad(pres, max_arity)?;
    let conv = Convolution::new(&kd.cooperad, &q.operad)?;
    let kappa = TwistingMorphism::new(&conv, koszul_morphism(&kd, &q))
        .map_err(|e| Error::Invalid(format!("κ is not a twisting morphism ({e}); presentation is not quadratic-consistent")))?;
    let mut arities = Vec::new();
    for n in 1..=max_arity {
        let left = twisted_composite(&kd.cooperad, &q.operad, &kappa, Side::Left, n)?.complex.homology_dims();
        let right = twisted_composite(&kd.cooperad, &q.operad, &kappa, Side::Right, n)?.complex.homology_dims();
        let inclusion = koszul_inclusion_comparison(&kd, &q, n)?.is_quasi_isomorphism();
        arities.push(ArityCertificate {
            arity: n,
            left_acyclic: acyclic(n, &left),
            right_acyclic: acyclic(n, &right),
            left_homology: left,
            right_homology: right,
            inclusion_quasi_iso: inclusion,
        });
    }
    Ok(KoszulnessReport { name: pres.name.clone(), max_arity, arities })
}
