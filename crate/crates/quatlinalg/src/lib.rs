//! Quaternion scalar and matrix algebra with the complex doubling.
//!
//! Quaternionic vector spaces are right modules throughout: scalars act on
//! the right, matrices act on vectors from the left. The complex 2n x 2n
//! representation identifies H^n with C^2n via q = a + b j, (a, b) complex,
//! and left multiplication becomes the block [[a, -b], [conj b, conj a]].

mod forms;
mod matrix;
mod quat;

pub use forms::{type_decompose, FormKind, FormValue};
pub use matrix::{ComplexStructureJ, QuatMatrix};
pub use quat::Quaternion;

/// Absolute tolerance for algebraic identities on unit-scale data.
pub const ALGEBRA_TOL: f64 = 1e-12;
