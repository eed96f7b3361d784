//! Exact scalar, matrix, and Laurent-polynomial arithmetic.

mod field;
mod laurent;
mod matrix;

pub use field::{Field, FieldScalar};
pub use laurent::{LaurentPoly, LaurentWindow};
pub use matrix::{ExactMatrix, VecSpace};
