//! Lower and upper bounds for the first Dirichlet eigenvalue of the
//! p-Laplacian on model geometries.
//!
//! * [`bounds`] evaluates closed-form lower bounds that follow from a test
//!   function with bounded gradient and p-Laplacian bounded below.
//! * [`eigensolver`] minimizes the discrete Rayleigh quotient of radial or
//!   one-dimensional reductions, which bounds the eigenvalue from above.
//! * [`inverse`] finds the ball radius with a prescribed first eigenvalue.
//! * [`reference`] holds independent oracles used to validate the solver.
//! * [`harness`] runs scenario files and writes CSV/JSON reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod eigensolver;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod inverse;
pub mod reference;

pub use error::{Error, Result};
