use serde::{Deserialize, Serialize};

use super::discrete::{Boundary, DiscreteFunction, Discretization, Grid, RadialProblem};
use crate::error::{Error, Result};
use crate::geometry::{SpaceForm, WarpedProduct};

/// Smallest grid the solver accepts.
pub const MIN_CELLS: usize = 16;

/// Slope floor of the preconditioner relative to the largest slope; keeps the
/// tridiagonal system nonsingular where `u' = 0` for `p > 2`.
const PRECONDITIONER_FLOOR: f64 = 1e-3;

/// Smallest trial step before the line search gives up.
const MIN_STEP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Stop when the relative change of the quotient over one iteration drops below this.
    pub rel_tol: f64,
    /// Iteration budget shared by all continuation stages.
    pub max_iters: usize,
    /// Smoothing levels for `p < 2`, strictly decreasing.
    pub epsilon_schedule: Vec<f64>,
    /// Step contraction factor of the backtracking line search.
    pub backtrack: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Keep the quotient value of every iteration in the result.
    pub record_history: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_iters: 50_000,
            epsilon_schedule: (2..=10).map(|k| 10f64.powi(-k)).collect(),
            backtrack: 0.5,
            armijo: 1e-4,
            record_history: false,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return bad("rel_tol must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if self.epsilon_schedule.is_empty()
            || self.epsilon_schedule.iter().any(|e| !(*e > 0.0 && e.is_finite()))
            || self.epsilon_schedule.windows(2).any(|w| w[1] >= w[0])
        {
            return bad("epsilon schedule must be positive and strictly decreasing");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtracking factor must lie in (0, 1)");
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return bad("Armijo constant must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Outcome of a discrete minimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Discrete minimum of the quotient; an upper bound for the first eigenvalue.
    pub lambda_hat: f64,
    /// Nonnegative minimizer with unit p-norm for the density divided by
    /// `exp(weight_log_scale)`.
    pub eigenfunction: DiscreteFunction,
    pub iterations: usize,
    pub converged: bool,
    pub grid_m: usize,
    /// Smoothing in effect at termination, 0 for `p >= 2`.
    pub epsilon_final: f64,
    pub weight_log_scale: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub history: Vec<f64>,
}

/// `R - r` for balls, distance to the nearer end for slabs.
pub fn default_initial_guess(problem: &RadialProblem, grid: &Grid) -> DiscreteFunction {
    let len = grid.length();
    match problem.boundary() {
        Boundary::Ball => DiscreteFunction::interpolate(grid, |r| (len - r).max(0.0)),
        Boundary::Slab => DiscreteFunction::interpolate(grid, |r| r.min(len - r).max(0.0)),
    }
}

/// Minimizes the discrete quotient from the default initial guess.
pub fn minimize(problem: &RadialProblem, grid: &Grid, opts: &SolverOptions) -> Result<EigenResult> {
    let start = default_initial_guess(problem, grid);
    minimize_from(problem, grid, opts, &start, &opts.epsilon_schedule)
}

/// Projected descent on the quotient: a gradient step preconditioned by the
/// tridiagonal second variation of the gradient term, a backtracking line
/// search on the quotient, then absolute value and renormalization.
///
/// For `p < 2` the slopes are smoothed and the smoothing is driven down
/// through `schedule`; for `p >= 2` the schedule is ignored.
pub fn minimize_from(
    problem: &RadialProblem,
    grid: &Grid,
    opts: &SolverOptions,
    initial: &DiscreteFunction,
    schedule: &[f64],
) -> Result<EigenResult> {
    opts.validate()?;
    if grid.cells() < MIN_CELLS {
        return Err(Error::InvalidParameter(format!(
            "the solver needs at least {MIN_CELLS} cells, got {}",
            grid.cells()
        )));
    }
    let disc = Discretization::new(problem, grid)?;
    let p = problem.exponent();
    let m = grid.cells();
    if initial.len() != m + 1 {
        return Err(Error::InvalidParameter("initial guess does not match the grid".into()));
    }

    let mut u: Vec<f64> = initial.values().iter().map(|v| v.abs()).collect();
    u[m] = 0.0;
    if problem.boundary() == Boundary::Slab {
        u[0] = 0.0;
    }
    disc.normalize(&mut u)?;

    let stages: Vec<f64> = if p < 2.0 {
        if schedule.is_empty() {
            return Err(Error::InvalidParameter("p < 2 needs a nonempty epsilon schedule".into()));
        }
        schedule.to_vec()
    } else {
        vec![0.0]
    };

    let mut iterations = 0;
    let mut converged = false;
    let mut history = Vec::new();
    let mut eps_final = stages[0];

    'stages: for &eps in &stages {
        eps_final = eps;
        converged = false;
        let mut q = disc.regularized_quotient(&u, eps)?;
        let mut step = 1.0_f64;
        loop {
            if iterations >= opts.max_iters {
                break 'stages;
            }
            let grad = disc.gradient(&u, eps)?;
            let smax = u
                .windows(2)
                .zip(grid.nodes().windows(2))
                .map(|(w, x)| ((w[1] - w[0]) / (x[1] - x[0])).abs())
                .fold(0.0, f64::max);
            let floor = (PRECONDITIONER_FLOOR * smax).max(eps);
            let mut dir = disc.precondition(&u, floor * floor, &grad);
            dir.iter_mut().for_each(|d| *d = -*d);
            let slope: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
            if !(slope < 0.0) {
                converged = true;
                break;
            }

            // Start from twice the last accepted step, never above 1 for p = 2
            // where a unit step is exactly one inverse iteration.
            let cap = if p == 2.0 { 1.0 } else { 4.0 };
            let mut alpha = (2.0 * step).min(cap);
            let mut trial = vec![0.0; m + 1];
            let accepted = loop {
                for j in 0..=m {
                    trial[j] = u[j] + alpha * dir[j];
                }
                if let Ok(qt) = disc.regularized_quotient(&trial, eps) {
                    if qt <= q + opts.armijo * alpha * slope {
                        break true;
                    }
                }
                alpha *= opts.backtrack;
                if alpha < MIN_STEP {
                    break false;
                }
            };
            if !accepted {
                // no representable decrease left along the descent direction
                converged = true;
                break;
            }
            step = alpha;
            trial.iter_mut().for_each(|v| *v = v.abs());
            disc.normalize(&mut trial)?;
            let q_new = disc.regularized_quotient(&trial, eps)?;
            u = trial;
            iterations += 1;
            if opts.record_history {
                history.push(q_new);
            }
            let change = (q - q_new).abs() / q_new.abs();
            q = q_new;
            if change < opts.rel_tol {
                converged = true;
                break;
            }
        }
    }

    let lambda_hat = disc.quotient(&u)?;
    Ok(EigenResult {
        lambda_hat,
        eigenfunction: DiscreteFunction(u),
        iterations,
        converged,
        grid_m: m,
        epsilon_final: if p < 2.0 { eps_final } else { 0.0 },
        weight_log_scale: disc.log_weight_scale(),
        history,
    })
}

/// Geodesic ball `B_R` of a space form on a uniform grid with `grid_m` cells.
pub fn solve_ball(
    geom: &SpaceForm,
    p: f64,
    radius: f64,
    grid_m: usize,
    opts: &SolverOptions,
) -> Result<EigenResult> {
    let problem = RadialProblem::ball(*geom, p, radius)?;
    let grid = Grid::uniform(radius, grid_m)?;
    minimize(&problem, &grid, opts)
}

/// Interval `[0, L]` with unit density.
pub fn solve_interval(p: f64, length: f64, grid_m: usize, opts: &SolverOptions) -> Result<EigenResult> {
    let problem = RadialProblem::interval(p, length)?;
    let grid = Grid::uniform(length, grid_m)?;
    minimize(&problem, &grid, opts)
}

/// Slab `[start, start + length] x N` of a warped product, test functions of `t` only.
pub fn solve_warped_slab(
    geom: &WarpedProduct,
    p: f64,
    start: f64,
    length: f64,
    grid_m: usize,
    opts: &SolverOptions,
) -> Result<EigenResult> {
    let problem = RadialProblem::warped_slab(geom.clone(), p, start, length)?;
    let grid = Grid::uniform(length, grid_m)?;
    minimize(&problem, &grid, opts)
}

/// Solves on `grid`, then on successive bisections of it up to `max_m` cells,
/// warm-starting each level from the previous eigenfunction.
pub fn solve_with_refinement(
    problem: &RadialProblem,
    grid: &Grid,
    opts: &SolverOptions,
    max_m: usize,
) -> Result<Vec<EigenResult>> {
    let start_m = grid.cells();
    if max_m < start_m || !max_m.is_multiple_of(start_m) || !(max_m / start_m).is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "max_m = {max_m} is not a power-of-two multiple of {start_m}"
        )));
    }
    let mut results = vec![minimize(problem, grid, opts)?];
    let mut current = grid.clone();
    while current.cells() < max_m {
        let next = current.refine();
        let prev = results.last().expect("at least one level");
        let warm = prev.eigenfunction.transfer(&current, &next);
        // warm starts resume continuation at the smoothing already reached
        let schedule = [prev.epsilon_final.max(*opts.epsilon_schedule.last().unwrap_or(&1e-10))];
        let schedule: &[f64] = if problem.exponent() < 2.0 { &schedule } else { &[] };
        results.push(minimize_from(problem, &next, opts, &warm, schedule)?);
        current = next;
    }
    Ok(results)
}
