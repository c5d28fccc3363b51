//! Algebras over the classical operads, their modules and enveloping algebras.

mod algebra;
mod derivation;
mod envelope;
mod module;

pub use algebra::{
    abelian_lie, affine_line_lie, check_algebra, matrix_algebra, restrict_along_operad_morphism, sl2, validate_algebra,
    AlgebraMorphism, PAlgebra, Violation,
};
pub use derivation::{derivations, kahler, Derivations};
pub use envelope::{enveloping_algebra, left_multiplication, pbw_monomials, Enveloping, Pbw, Poly, TruncatedAssocAlgebra};
pub use module::{
    free_module, free_module_over, graded_hom_space, hom_space, hom_space_shifted, induce_module, quotient_module, regular_module, restrict_module, trivial_module,
    validate_module, PModule,
};
