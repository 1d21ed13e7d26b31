//! A pre-order and equivalence on matrix contractions defined by defect-sandwich witnesses, lifted to matrix-valued
//! Schur-class functions and pushed through Redheffer linear fractional maps.
//!
//! Every decision is backed by an explicit certificate (a sandwich witness plus residuals)
//! so that results can be re-checked independently.

pub mod numeric;
pub mod preorder;
pub mod random;
pub mod redheffer;
pub mod schur;

pub use numeric::{ComplexMatrix, Complex64, NumericError, Tolerances};
