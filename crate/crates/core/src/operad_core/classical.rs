use std::fmt;
use std::str::FromStr;

use crate::exactalg::Scalar;
use crate::symcore::SigmaRep;
use crate::Error;

use super::free::{quotient_presentation, OperadPresentation, QuotientOperad};
use super::tree::{add_term, Tree, TreeVec};
use super::SigmaObject;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalOperad {
    Com,
    Asc,
    Lie,
}

impl ClassicalOperad {
    pub const ALL: [ClassicalOperad; 3] = [ClassicalOperad::Com, ClassicalOperad::Asc, ClassicalOperad::Lie];

    pub fn name(self) -> &'static str {
        match self {
            ClassicalOperad::Com => "Com",
            ClassicalOperad::Asc => "Asc",
            ClassicalOperad::Lie => "Lie",
        }
    }
}

impl fmt::Display for ClassicalOperad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassicalOperad {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "com" => Ok(ClassicalOperad::Com),
            "asc" | "ass" | "assoc" => Ok(ClassicalOperad::Asc),
            "lie" => Ok(ClassicalOperad::Lie),
            _ => Err(Error::Config(format!("unknown operad tag `{}`", s))),
        }
    }
}

fn bin(d: usize, a: Tree, b: Tree) -> Tree {
    Tree::Node { arity: 2, decoration: d, children: vec![a, b] }
}

fn leaf(i: usize) -> Tree {
    Tree::Leaf(i)
}

/// Binary quadratic presentation: one generator for Com and Lie, the regular Σ₂-module for Asc
/// (basis `m`, `m·(12)` where `m·(12)(a,b) = m(b,a)`).
pub fn classical_presentation<F: Scalar>(kind: ClassicalOperad) -> OperadPresentation<F> {
    let mut generators = SigmaObject::zero(2);
    let mut rel = TreeVec::new();
    match kind {
        ClassicalOperad::Com => {
            generators.set(SigmaRep::trivial(2, 0), Some(vec!["m".into()]), None);
            add_term(&mut rel, bin(0, bin(0, leaf(0), leaf(1)), leaf(2)), F::one());
            add_term(&mut rel, bin(0, leaf(0), bin(0, leaf(1), leaf(2))), -F::one());
        }
        ClassicalOperad::Asc => {
            generators.set(SigmaRep::regular(2, 0), Some(vec!["m".into(), "m'".into()]), None);
            add_term(&mut rel, bin(0, bin(0, leaf(0), leaf(1)), leaf(2)), F::one());
            add_term(&mut rel, bin(0, leaf(0), bin(0, leaf(1), leaf(2))), -F::one());
        }
        ClassicalOperad::Lie => {
            generators.set(SigmaRep::sign(2, 0), Some(vec!["b".into()]), None);
            add_term(&mut rel, bin(0, bin(0, leaf(0), leaf(1)), leaf(2)), F::one());
            add_term(&mut rel, bin(0, bin(0, leaf(1), leaf(2)), leaf(0)), F::one());
            add_term(&mut rel, bin(0, bin(0, leaf(2), leaf(0)), leaf(1)), F::one());
        }
    }
    OperadPresentation { name: kind.name().into(), generators, relations: vec![(3, rel)] }
}

pub fn classical_operad<F: Scalar>(kind: ClassicalOperad, max_arity: usize) -> Result<QuotientOperad<F>, Error> {
    quotient_presentation(&classical_presentation(kind), max_arity)
}
