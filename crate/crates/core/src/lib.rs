//! Numerical verification of norm inequalities for Heinz and Heron means.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: dense real matrices, Jacobi eigen/SVD, fractional powers.
//! * [`norms`]: unitarily invariant norms as gauges of singular values.
//! * [`means`]: scalar means and the matrix mean expressions.
//! * [`quadrature`]: adaptive Simpson integration.
//! * [`functionals`]: the functionals `F`, `G`, `K`, `φ` and one checker per
//!   inequality chain, each returning the full chain with its margins.

// `!(x > 0.0)` style guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod functionals;
pub mod linalg;
pub mod means;
pub mod norms;
pub mod quadrature;

pub use error::{Error, Result};
pub use functionals::{CheckResult, Evaluator};
pub use linalg::Matrix;
pub use means::MeanTriple;
pub use norms::NormKind;
