//! Exact computations with operads, their algebras, and relative and semi-infinite homology.

pub mod algebra_complexes;
pub mod exactalg;
pub mod koszul_machine;
pub mod operad_core;
pub mod palgebra;
pub mod relhom;
pub mod seminf;
pub mod symcore;

pub use exactalg::{Fp, Rational, Scalar};

/// 𝔽₇, the smallest prime field admitted at the default arity bound.
pub type F7 = Fp<7>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("characteristic error: {0}")]
    Characteristic(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("arity error: {0}")]
    Arity(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("configuration error: {0}")]
    Config(String),
}
