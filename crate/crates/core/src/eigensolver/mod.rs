//! Upper bounds on the first eigenvalue by direct minimization of the
//! weighted p-Rayleigh quotient of a one-dimensional reduction.
//!
//! Radial functions on a geodesic ball and `t`-only functions on a slab of a
//! warped product are admissible test functions, so the discrete minimum over
//! piecewise-linear functions bounds the first Dirichlet eigenvalue of the
//! ball or slab from above.

mod discrete;
mod solver;

pub use discrete::{
    quotient_gradient, rayleigh_quotient, regularized_quotient, Boundary, DiscreteFunction,
    Discretization, Grid, Quadrature, RadialProblem, Weight,
};
pub use solver::{
    default_initial_guess, minimize, minimize_from, solve_ball, solve_interval,
    solve_warped_slab, solve_with_refinement, EigenResult, SolverOptions, MIN_CELLS,
};
