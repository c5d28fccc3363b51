//! Semi-infinite structures on weight-graded algebras and the semi-infinite complex
//! `Hom(BD(A,B,A), M) ⊗_{U(A)} BD(A,N,A)`.

mod checks;
mod complex;
mod structure;

pub use checks::{augmentation_exactness, resolution_property_checks, PropertyCheck, ResolutionReport};
pub use complex::{semiinfinite_complex, semiinfinite_homology, SemiInfiniteComplex, SemiInfiniteHomology, HOM_ACTION_CONVENTION};
pub use structure::{
    validate_semiinfinite, ConditionCheck, SemiInfiniteCertificate, SemiInfiniteStructure, Status, StraighteningBound,
};

#[cfg(test)]
mod tests;
