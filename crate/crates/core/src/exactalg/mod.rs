//! Exact scalars, sparse linear algebra, and finite chain complexes.

mod complex;
mod matrix;
mod scalar;

pub use complex::{ChainComplex, Direction, GradedSpace, Homology};
pub use matrix::{accumulate, svec_add, svec_from_map, svec_scale, Echelon, Rref, SVec, SparseMatrix};
pub use scalar::{check_field, is_prime, Fp, Rational, Scalar};
