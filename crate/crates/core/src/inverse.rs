//! Radius of the geodesic ball with a prescribed first eigenvalue.
//!
//! On a space form with `c <= 0` geodesic balls exist for every radius and
//! `L(R) = λ_{1,p}(B_R)` decreases continuously from `+inf` to the
//! fundamental tone of the whole space, so every larger target is hit by
//! exactly one radius. [`radius_for_eigenvalue`] locates it by bisection on
//! the numerically computed `L`.
//!
//! The discrete `L` overestimates the true one, so the returned radius is
//! biased slightly upward; the bias shrinks with the grid.

use serde::{Deserialize, Serialize};

use crate::bounds::hyperbolic_fundamental_tone_bound;
use crate::eigensolver::{solve_ball, SolverOptions};
use crate::error::{check_exponent, Error, Result};
use crate::geometry::{Regime, SpaceForm};

const MIN_RADIUS: f64 = 1e-6;
const MAX_RADIUS: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseQuery {
    pub geom: SpaceForm,
    pub p: f64,
    pub lambda_target: f64,
    /// Width of the final radius bracket.
    pub tol_r: f64,
    pub grid_m: usize,
    pub opts: SolverOptions,
}

impl InverseQuery {
    pub fn new(geom: SpaceForm, p: f64, lambda_target: f64) -> Self {
        Self {
            geom,
            p,
            lambda_target,
            tol_r: 1e-3,
            grid_m: 2048,
            opts: SolverOptions::default(),
        }
    }

    /// Infimum of `L`, below which no radius exists.
    pub fn asymptotic_floor(&self) -> Result<f64> {
        match self.geom.regime() {
            Regime::Hyperbolic => {
                hyperbolic_fundamental_tone_bound(self.geom.dim(), self.geom.curvature_scale(), self.p)
            }
            Regime::Euclidean => Ok(0.0),
            Regime::Spherical => Err(Error::InvalidParameter(
                "inverse radius problems need curvature c <= 0".into(),
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.p)?;
        let floor = self.asymptotic_floor()?;
        if !(self.lambda_target.is_finite() && self.lambda_target > floor) {
            return Err(Error::NoBracket(format!(
                "target {} must exceed the fundamental tone {floor} of the whole space",
                self.lambda_target
            )));
        }
        if !(self.tol_r > 0.0) {
            return Err(Error::InvalidParameter("tol_r must be positive".into()));
        }
        self.opts.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseOutcome {
    pub radius: f64,
    /// Bracket `[lo, hi]` with `L(lo) >= target >= L(hi)`.
    pub bracket: (f64, f64),
    /// Discrete eigenvalue at the returned radius.
    pub lambda_at_radius: f64,
    pub solves: usize,
}

/// Bisection on `R -> L(R)` for `L(R) = lambda_target`.
pub fn radius_for_eigenvalue(q: &InverseQuery) -> Result<InverseOutcome> {
    q.validate()?;
    let target = q.lambda_target;
    let mut solves = 0;
    let mut eigenvalue = |r: f64| -> Result<f64> {
        solves += 1;
        Ok(solve_ball(&q.geom, q.p, r, q.grid_m, &q.opts)?.lambda_hat)
    };

    let mut r = 1.0;
    let at_one = eigenvalue(r)?;
    let (mut lo, mut hi) = if at_one > target {
        loop {
            let next = 2.0 * r;
            if next > MAX_RADIUS {
                return Err(Error::NoBracket(format!(
                    "L(R) stays above {target} up to R = {MAX_RADIUS}"
                )));
            }
            if eigenvalue(next)? <= target {
                break (r, next);
            }
            r = next;
        }
    } else {
        loop {
            let next = 0.5 * r;
            if next < MIN_RADIUS {
                return Err(Error::NoBracket(format!(
                    "L(R) stays below {target} down to R = {MIN_RADIUS}"
                )));
            }
            if eigenvalue(next)? >= target {
                break (next, r);
            }
            r = next;
        }
    };

    while hi - lo > q.tol_r {
        let mid = 0.5 * (lo + hi);
        if eigenvalue(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    let lambda_at_radius = eigenvalue(radius)?;
    Ok(InverseOutcome { radius, bracket: (lo, hi), lambda_at_radius, solves })
}
