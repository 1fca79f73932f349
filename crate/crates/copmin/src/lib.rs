//! Exact computation of the copositive minimum of symmetric rational matrices.
//!
//! The pipeline: a pivoted rational LDLT factorization rewrites the quadratic
//! form as a weighted sum of squares (`ldlt`), coordinates whose weight is not
//! strictly positive get finite search boxes from certified convex bounds or a
//! PSD-plus-nonnegative split (`bounds`), and a depth-first enumeration over
//! the nonnegative integer points below a shrinking bound recovers the exact
//! minimum and all vectors attaining it (`enumeration`, `solver`).
//!
//! All solver-critical arithmetic is exact (arbitrary-precision rationals);
//! floating point appears only inside eigenvalue/QP subroutines whose output
//! is always re-certified exactly before it is trusted.

// Indexed loops mirror the i/j summation formulas throughout; iterator
// rewrites would obscure them.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod eigen;
pub mod enumeration;
pub mod gadgets;
pub mod ldlt;
pub mod matrix;
pub mod oracle;
pub mod rational;
pub mod solver;

pub use matrix::{NonnegIntVector, Permutation, SymRationalMatrix};
pub use rational::Rational;
