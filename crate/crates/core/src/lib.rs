//! Cross-dimensional linear algebra built on the semi-tensor product.
//!
//! Matrices of arbitrary shape act on vectors of arbitrary dimension. The
//! crate provides:
//!
//! - [`matrix`]: the dense substrate ([`Matrix`], [`Vect`]) with Kronecker
//!   lifts, inverses, norms and rank decisions.
//! - [`algebra`]: M-/V-products, M-/V-addition and the dimension-free metric.
//! - [`quotient`]: canonical representatives of vector and matrix
//!   equivalence classes.
//! - [`poly`]: formal polynomials of matrices and certified truncated series.
//! - [`dynamics`]: dimension profiles, invariant spaces and trajectory solvers.
//! - [`control`]: stationary realizations, controllability/observability and
//!   projective realizations of quotient-space systems.
//! - [`io`]: the JSON file formats shared by the command line and the demo.

pub mod algebra;
pub mod arith;
pub mod control;
pub mod dynamics;
mod error;
pub mod expm;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod quotient;

pub use arith::Ratio;
pub use error::{Error, Result};
pub use matrix::{Matrix, Vect};

/// Default tolerance for equivalence and block-pattern decisions.
pub const DEFAULT_TOL: f64 = 1e-9;
