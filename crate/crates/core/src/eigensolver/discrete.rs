//! Discrete weighted p-Rayleigh quotient of piecewise-linear functions.
//!
//! For nodal values `u_0..u_m` on `0 = r_0 < ... < r_m = R` the quotient is
//!
//! ```text
//!     Σ_i W_i |s_i|^p  /  ∫ |u|^p w dr,      s_i = (u_{i+1} - u_i) / h_i,
//! ```
//!
//! with `W_i` the weight integrated over cell `i`. With the default
//! [`Quadrature::Exact`] rule both integrals are evaluated with a four-point
//! Gauss rule per cell, which makes the discrete quotient the true quotient of
//! the piecewise-linear function up to quadrature error. Refining a grid by
//! bisection then embeds the coarse space in the fine one, and the discrete
//! minimum is an upper bound on the continuous one.

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::geometry::{SpaceForm, WarpedProduct};

/// Radial density of the one-dimensional reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `w = 1`, an interval or a slab of a product.
    Constant,
    /// `f_c(r)^{n-1}`, a geodesic ball of a space form.
    Ball(SpaceForm),
    /// `e^{(n-1)ρ(start + r)}`, the slab `[start, start + length]` of a warped product.
    Warped { geom: WarpedProduct, start: f64 },
}

impl Weight {
    /// `ln w(r)`; `-inf` where the density vanishes.
    pub fn log_eval(&self, r: f64) -> Result<f64> {
        match self {
            Self::Constant => Ok(0.0),
            Self::Ball(g) => g.log_ball_volume_weight(r),
            Self::Warped { geom, start } => geom.log_volume_weight(start + r),
        }
    }
}

/// Boundary conditions of the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Natural condition at `r = 0` (the center of a ball), Dirichlet at `R`.
    Ball,
    /// Dirichlet at both ends.
    Slab,
}

/// Quadrature used for the two integrals of the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    /// Four-point Gauss–Legendre on every cell for both integrals.
    #[default]
    Exact,
    /// Midpoint weight for the gradient term, nodal weights with half-cell
    /// masses for the `L^p` term. Cheaper but not nested under refinement.
    Lumped,
}

/// A weighted one-dimensional p-Rayleigh-quotient minimization instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    p: f64,
    length: f64,
    weight: Weight,
    boundary: Boundary,
    quadrature: Quadrature,
}

impl RadialProblem {
    pub fn new(p: f64, length: f64, weight: Weight, boundary: Boundary) -> Result<Self> {
        check_exponent(p)?;
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!("length must be > 0, got {length}")));
        }
        match &weight {
            Weight::Ball(g) => {
                if let Some(cut) = g.cut_locus() {
                    if length >= cut {
                        return Err(Error::Domain(format!(
                            "ball radius {length} is at or beyond the cut locus {cut}"
                        )));
                    }
                }
            }
            Weight::Warped { geom, start } => {
                let (lo, hi) = geom.profile().domain();
                if !(*start >= lo && start + length <= hi) {
                    return Err(Error::Domain(format!(
                        "slab [{start}, {}] leaves the profile domain [{lo}, {hi}]",
                        start + length
                    )));
                }
            }
            Weight::Constant => {}
        }
        Ok(Self { p, length, weight, boundary, quadrature: Quadrature::Exact })
    }

    /// Geodesic ball of radius `R` in a space form.
    pub fn ball(geom: SpaceForm, p: f64, radius: f64) -> Result<Self> {
        Self::new(p, radius, Weight::Ball(geom), Boundary::Ball)
    }

    /// Interval `[0, L]` with unit weight and Dirichlet ends.
    pub fn interval(p: f64, length: f64) -> Result<Self> {
        Self::new(p, length, Weight::Constant, Boundary::Slab)
    }

    /// Slab `[start, start + length]` of a warped product, functions of `t` only.
    pub fn warped_slab(geom: WarpedProduct, p: f64, start: f64, length: f64) -> Result<Self> {
        Self::new(p, length, Weight::Warped { geom, start }, Boundary::Slab)
    }

    pub fn with_quadrature(mut self, quadrature: Quadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    /// Index of the first node carrying a free value.
    pub fn first_free(&self) -> usize {
        match self.boundary {
            Boundary::Ball => 0,
            Boundary::Slab => 1,
        }
    }
}

/// Nodes `0 = r_0 < r_1 < ... < r_m = R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    nodes: Vec<f64>,
}

impl Grid {
    pub fn uniform(length: f64, cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidParameter(format!("a grid needs at least 2 cells, got {cells}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!("length must be > 0, got {length}")));
        }
        let h = length / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
        nodes[cells] = length;
        Ok(Self { nodes })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidParameter("a grid needs at least 2 cells".into()));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidParameter("the first node must be 0".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || !nodes[nodes.len() - 1].is_finite() {
            return Err(Error::InvalidParameter("nodes must be finite and strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn length(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Bisects every cell.
    pub fn refine(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.length());
        Self { nodes }
    }
}

/// Nodal values of a continuous piecewise-linear function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteFunction(pub Vec<f64>);

impl DiscreteFunction {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self(self.0.iter().map(|v| t * v).collect())
    }

    pub fn abs(&self) -> Self {
        Self(self.0.iter().map(|v| v.abs()).collect())
    }

    /// Samples `f` at the grid nodes.
    pub fn interpolate(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self(grid.nodes().iter().map(|&r| f(r)).collect())
    }

    /// Linear interpolation from `from` onto `to`. `to` must cover the same interval.
    pub fn transfer(&self, from: &Grid, to: &Grid) -> Self {
        let xs = from.nodes();
        Self(
            to.nodes()
                .iter()
                .map(|&r| {
                    let j = xs.partition_point(|&x| x <= r).clamp(1, xs.len() - 1);
                    let s = ((r - xs[j - 1]) / (xs[j] - xs[j - 1])).clamp(0.0, 1.0);
                    self.0[j - 1] + s * (self.0[j] - self.0[j - 1])
                })
                .collect(),
        )
    }
}

const GAUSS_NODES: [f64; 4] = [
    0.069_431_844_202_973_71,
    0.330_009_478_207_571_87,
    0.669_990_521_792_428_1,
    0.930_568_155_797_026_3,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.173_927_422_568_726_93,
    0.326_072_577_431_273_07,
    0.326_072_577_431_273_07,
    0.173_927_422_568_726_93,
];

/// `|t|^p`, with the `p = 2` case kept exact.
#[inline]
fn pow_abs(t: f64, p: f64) -> f64 {
    if p == 2.0 {
        t * t
    } else {
        t.abs().powf(p)
    }
}

/// Precomputed weights of the discrete quotient for one problem on one grid.
///
/// The density is rescaled by its maximum over the quadrature points so that
/// large hyperbolic balls do not overflow; the quotient is unaffected.
#[derive(Debug, Clone)]
pub struct Discretization {
    p: f64,
    first_free: usize,
    h: Vec<f64>,
    /// `∫_cell w`, rescaled.
    cell_weight: Vec<f64>,
    mass: Mass,
    log_scale: f64,
}

#[derive(Debug, Clone)]
enum Mass {
    /// Per cell, `GAUSS_WEIGHTS[k] * h * w(x_k)`.
    Gauss(Vec<[f64; 4]>),
    /// Per node.
    Nodal(Vec<f64>),
}

impl Discretization {
    pub fn new(problem: &RadialProblem, grid: &Grid) -> Result<Self> {
        let scale = problem.length().max(1.0);
        if ((grid.length() - problem.length()) / scale).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "grid covers [0, {}] but the problem lives on [0, {}]",
                grid.length(),
                problem.length()
            )));
        }
        let nodes = grid.nodes();
        let m = grid.cells();
        let h: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let weight = problem.weight();

        match problem.quadrature() {
            Quadrature::Exact => {
                let mut logs = Vec::with_capacity(4 * m);
                for (i, hi) in h.iter().enumerate() {
                    for xi in GAUSS_NODES {
                        logs.push(weight.log_eval(nodes[i] + xi * hi)?);
                    }
                }
                let log_scale = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut cell_weight = Vec::with_capacity(m);
                let mut gauss = Vec::with_capacity(m);
                for (i, hi) in h.iter().enumerate() {
                    let mut cell = [0.0; 4];
                    for k in 0..4 {
                        cell[k] = GAUSS_WEIGHTS[k] * hi * (logs[4 * i + k] - log_scale).exp();
                    }
                    cell_weight.push(cell.iter().sum());
                    gauss.push(cell);
                }
                Ok(Self {
                    p: problem.exponent(),
                    first_free: problem.first_free(),
                    h,
                    cell_weight,
                    mass: Mass::Gauss(gauss),
                    log_scale,
                })
            }
            Quadrature::Lumped => {
                let mid_logs = h
                    .iter()
                    .enumerate()
                    .map(|(i, hi)| weight.log_eval(nodes[i] + 0.5 * hi))
                    .collect::<Result<Vec<_>>>()?;
                let node_logs =
                    nodes.iter().map(|&r| weight.log_eval(r)).collect::<Result<Vec<_>>>()?;
                let log_scale = mid_logs
                    .iter()
                    .chain(&node_logs)
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                let cell_weight =
                    mid_logs.iter().zip(&h).map(|(l, hi)| (l - log_scale).exp() * hi).collect();
                let nodal = (0..=m)
                    .map(|j| {
                        let left = if j > 0 { h[j - 1] } else { 0.0 };
                        let right = if j < m { h[j] } else { 0.0 };
                        0.5 * (left + right) * (node_logs[j] - log_scale).exp()
                    })
                    .collect();
                Ok(Self {
                    p: problem.exponent(),
                    first_free: problem.first_free(),
                    h,
                    cell_weight,
                    mass: Mass::Nodal(nodal),
                    log_scale,
                })
            }
        }
    }

    pub fn cells(&self) -> usize {
        self.h.len()
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// Free nodal indices, `first_free..=m-1`.
    pub fn free(&self) -> std::ops::Range<usize> {
        self.first_free..self.h.len()
    }

    /// `ln` of the factor the density was divided by.
    pub fn log_weight_scale(&self) -> f64 {
        self.log_scale
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        let m = self.h.len();
        if u.len() != m + 1 {
            return Err(Error::InvalidParameter(format!(
                "function has {} nodal values, grid has {} nodes",
                u.len(),
                m + 1
            )));
        }
        let pinned_ok = u[m] == 0.0 && (self.first_free == 0 || u[0] == 0.0);
        if !pinned_ok {
            return Err(Error::InvalidParameter(
                "function does not vanish on the Dirichlet nodes".into(),
            ));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("function has non-finite values".into()));
        }
        Ok(())
    }

    /// `∫ |u|^p w dr` (rescaled density).
    pub fn denominator(&self, u: &[f64]) -> f64 {
        let p = self.p;
        match &self.mass {
            Mass::Gauss(cells) => cells
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    (0..4)
                        .map(|k| {
                            let x = GAUSS_NODES[k];
                            g[k] * pow_abs((1.0 - x) * u[i] + x * u[i + 1], p)
                        })
                        .sum::<f64>()
                })
                .sum(),
            Mass::Nodal(mass) => mass.iter().zip(u).map(|(mj, uj)| mj * pow_abs(*uj, p)).sum(),
        }
    }

    fn add_denominator_gradient(&self, u: &[f64], scale: f64, out: &mut [f64]) {
        let p = self.p;
        let dpow = |t: f64| -> f64 {
            if t == 0.0 {
                0.0
            } else {
                p * t.abs().powf(p - 1.0) * t.signum()
            }
        };
        match &self.mass {
            Mass::Gauss(cells) => {
                for (i, g) in cells.iter().enumerate() {
                    for k in 0..4 {
                        let x = GAUSS_NODES[k];
                        let d = scale * g[k] * dpow((1.0 - x) * u[i] + x * u[i + 1]);
                        out[i] += (1.0 - x) * d;
                        out[i + 1] += x * d;
                    }
                }
            }
            Mass::Nodal(mass) => {
                for (j, mj) in mass.iter().enumerate() {
                    out[j] += scale * mj * dpow(u[j]);
                }
            }
        }
    }

    fn slopes<'a>(&'a self, u: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        u.windows(2).zip(&self.h).map(|(w, h)| (w[1] - w[0]) / h)
    }

    /// `ε^2 D^{2/p}`: the smoothing applied to squared slopes, scaled with the
    /// function so that the regularized quotient stays 0-homogeneous.
    fn smoothing(&self, eps: f64, denom: f64) -> f64 {
        if eps == 0.0 {
            0.0
        } else {
            eps * eps * denom.powf(2.0 / self.p)
        }
    }

    fn numerator(&self, u: &[f64], smooth: f64) -> f64 {
        let p = self.p;
        self.slopes(u)
            .zip(&self.cell_weight)
            .map(|(s, w)| {
                if smooth == 0.0 {
                    w * pow_abs(s, p)
                } else {
                    w * (s * s + smooth).powf(0.5 * p)
                }
            })
            .sum()
    }

    /// The ε-regularized quotient, in which every slope magnitude `|s|` of the
    /// normalized function is replaced by `sqrt(s^2 + ε^2)`. `ε = 0` gives the
    /// plain quotient.
    pub fn regularized_quotient(&self, u: &[f64], eps: f64) -> Result<f64> {
        self.check(u)?;
        let d = self.denominator(u);
        if d <= 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(self.numerator(u, self.smoothing(eps, d)) / d)
    }

    pub fn quotient(&self, u: &[f64]) -> Result<f64> {
        self.regularized_quotient(u, 0.0)
    }

    /// Gradient of [`Self::regularized_quotient`] with respect to the nodal
    /// values; zero on Dirichlet nodes.
    pub fn gradient(&self, u: &[f64], eps: f64) -> Result<Vec<f64>> {
        self.check(u)?;
        let p = self.p;
        if p < 2.0 && !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "the gradient for p = {p} < 2 needs a smoothing parameter eps > 0"
            )));
        }
        let d = self.denominator(u);
        if d <= 0.0 {
            return Err(Error::ZeroFunction);
        }
        let smooth = self.smoothing(eps, d);
        let m = self.h.len();
        let mut grad_num = vec![0.0; m + 1];
        let mut numerator = 0.0;
        // Σ W_i (p/2)(s^2 + δ)^{p/2-1}, the sensitivity of N to the smoothing δ
        let mut smooth_sensitivity = 0.0;
        for (i, s) in self.slopes(u).enumerate() {
            let w = self.cell_weight[i];
            let q = s * s + smooth;
            let (value, flux) = if q == 0.0 {
                (0.0, 0.0)
            } else if p == 2.0 {
                (w * q, 2.0 * w * s)
            } else {
                let base = q.powf(0.5 * p - 1.0);
                smooth_sensitivity += w * 0.5 * p * base;
                (w * base * q, w * p * base * s)
            };
            numerator += value;
            let c = flux / self.h[i];
            grad_num[i] -= c;
            grad_num[i + 1] += c;
        }
        if p == 2.0 && smooth > 0.0 {
            smooth_sensitivity = self.cell_weight.iter().sum();
        }
        // dQ = dN/D - N dD/D^2, with N depending on D through the smoothing
        let smooth_factor = if smooth > 0.0 {
            smooth_sensitivity * eps * eps * (2.0 / p) * d.powf(2.0 / p - 1.0)
        } else {
            0.0
        };
        let mut grad = vec![0.0; m + 1];
        for j in 0..=m {
            grad[j] = grad_num[j] / d;
        }
        self.add_denominator_gradient(u, (smooth_factor - numerator / d) / d, &mut grad);
        grad[m] = 0.0;
        if self.first_free == 1 {
            grad[0] = 0.0;
        }
        Ok(grad)
    }

    /// Normalizes `u` in place to unit weighted p-norm.
    pub fn normalize(&self, u: &mut [f64]) -> Result<()> {
        let d = self.denominator(u);
        if !(d > 0.0) {
            return Err(Error::ZeroFunction);
        }
        let t = d.powf(-1.0 / self.p);
        u.iter_mut().for_each(|v| *v *= t);
        Ok(())
    }

    /// Solves `P x = rhs` on the free nodes, where `P` is the tridiagonal
    /// second variation of the gradient term at `u`, with slopes floored by
    /// `floor` (absolute, in slope units).
    pub(crate) fn precondition(&self, u: &[f64], floor2: f64, rhs: &[f64]) -> Vec<f64> {
        let p = self.p;
        let m = self.h.len();
        let f0 = self.first_free;
        let coeff: Vec<f64> = self
            .slopes(u)
            .enumerate()
            .map(|(i, s)| {
                let w = self.cell_weight[i] / (self.h[i] * self.h[i]);
                if p == 2.0 {
                    2.0 * w
                } else {
                    let q = s * s + floor2;
                    w * p * q.powf(0.5 * p - 2.0) * ((p - 1.0) * s * s + floor2)
                }
            })
            .collect();
        let size = m - f0;
        let mut diag = vec![0.0; size];
        let mut upper = vec![0.0; size];
        for i in 0..m {
            let c = coeff[i];
            if i >= f0 {
                diag[i - f0] += c;
            }
            if i + 1 < m {
                diag[i + 1 - f0] += c;
                if i >= f0 {
                    upper[i - f0] = -c;
                }
            }
        }
        let mut x = vec![0.0; m + 1];
        let b: Vec<f64> = rhs[f0..m].to_vec();
        let sol = thomas(&diag, &upper, b);
        x[f0..m].copy_from_slice(&sol);
        x
    }
}

/// Symmetric tridiagonal solve, `upper[i]` couples rows `i` and `i + 1`.
fn thomas(diag: &[f64], upper: &[f64], mut rhs: Vec<f64>) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = if n > 1 { upper[0] / denom } else { 0.0 };
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - upper[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = upper[i] / denom;
        }
        rhs[i] = (rhs[i] - upper[i - 1] * rhs[i - 1]) / denom;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    rhs
}

/// Discrete Rayleigh quotient of `u`.
pub fn rayleigh_quotient(problem: &RadialProblem, grid: &Grid, u: &DiscreteFunction) -> Result<f64> {
    Discretization::new(problem, grid)?.quotient(u.values())
}

/// Discrete quotient with slopes smoothed by `sqrt(s^2 + ε^2)` after
/// normalizing `u` to unit weighted p-norm.
pub fn regularized_quotient(
    problem: &RadialProblem,
    grid: &Grid,
    u: &DiscreteFunction,
    eps: f64,
) -> Result<f64> {
    Discretization::new(problem, grid)?.regularized_quotient(u.values(), eps)
}

/// Gradient of the (ε-regularized when `p < 2`) quotient with respect to the
/// free nodal values.
pub fn quotient_gradient(
    problem: &RadialProblem,
    grid: &Grid,
    u: &DiscreteFunction,
    eps: f64,
) -> Result<DiscreteFunction> {
    Ok(DiscreteFunction(Discretization::new(problem, grid)?.gradient(u.values(), eps)?))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn single_hat_quotients() {
        let grid = Grid::uniform(1.0, 2).unwrap();
        let u = DiscreteFunction(vec![0.0, 1.0, 0.0]);
        // slopes ±2, numerator 2 * 4 * 1/2 = 4
        let lumped = RadialProblem::interval(2.0, 1.0).unwrap().with_quadrature(Quadrature::Lumped);
        assert!((rayleigh_quotient(&lumped, &grid, &u).unwrap() - 8.0).abs() < 1e-14);
        // exact mass of the hat is 2 * h / 3 = 1/3
        let exact = RadialProblem::interval(2.0, 1.0).unwrap();
        assert!((rayleigh_quotient(&exact, &grid, &u).unwrap() - 12.0).abs() < 1e-13);
    }

    #[test]
    fn sine_interpolant_quotient() {
        let problem = RadialProblem::interval(2.0, 1.0).unwrap();
        let grid = Grid::uniform(1.0, 512).unwrap();
        let mut u = DiscreteFunction::interpolate(&grid, |r| (PI * r).sin());
        u.0[0] = 0.0;
        u.0[512] = 0.0;
        let q = rayleigh_quotient(&problem, &grid, &u).unwrap();
        assert!((q - 9.8700).abs() < 1e-3, "{q}");
        // consistent-mass linear elements: 6/h^2 (1 - cos πh)/(2 + cos πh)
        let h = 1.0 / 512.0;
        let c = (PI * h).cos();
        assert!((q - 6.0 / (h * h) * (1.0 - c) / (2.0 + c)).abs() < 1e-9);
    }

    #[test]
    fn zero_and_unpinned_functions_are_rejected() {
        let problem = RadialProblem::interval(2.0, 1.0).unwrap();
        let grid = Grid::uniform(1.0, 4).unwrap();
        let zero = DiscreteFunction(vec![0.0; 5]);
        assert!(matches!(rayleigh_quotient(&problem, &grid, &zero), Err(Error::ZeroFunction)));
        let unpinned = DiscreteFunction(vec![0.1, 1.0, 1.0, 1.0, 0.0]);
        assert!(matches!(
            rayleigh_quotient(&problem, &grid, &unpinned),
            Err(Error::InvalidParameter(_))
        ));
        let short = DiscreteFunction(vec![0.0, 1.0, 0.0]);
        assert!(rayleigh_quotient(&problem, &grid, &short).is_err());
    }

    #[test]
    fn ball_center_is_free() {
        let g = SpaceForm::new(3, 0.0).unwrap();
        let problem = RadialProblem::ball(g, 2.0, 1.0).unwrap();
        let grid = Grid::uniform(1.0, 8).unwrap();
        let u = DiscreteFunction::interpolate(&grid, |r| 1.0 - r);
        assert!(rayleigh_quotient(&problem, &grid, &u).is_ok());
        let grad = quotient_gradient(&problem, &grid, &u, 0.0).unwrap();
        assert!(grad.0[0] != 0.0);
        assert_eq!(grad.0[8], 0.0);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let problem = RadialProblem::interval(2.0, 1.0).unwrap();
        let grid = Grid::uniform(2.0, 4).unwrap();
        assert!(Discretization::new(&problem, &grid).is_err());
    }

    #[test]
    fn p_below_two_gradient_needs_smoothing() {
        let problem = RadialProblem::interval(1.5, 1.0).unwrap();
        let grid = Grid::uniform(1.0, 4).unwrap();
        let u = DiscreteFunction(vec![0.0, 1.0, 1.0, 1.0, 0.0]);
        assert!(quotient_gradient(&problem, &grid, &u, 0.0).is_err());
        assert!(quotient_gradient(&problem, &grid, &u, 1e-4).is_ok());
    }

    #[test]
    fn symmetric_function_has_symmetric_gradient() {
        let problem = RadialProblem::interval(2.0, 1.0).unwrap();
        let grid = Grid::uniform(1.0, 32).unwrap();
        let u = DiscreteFunction::interpolate(&grid, |r| r * (1.0 - r));
        let g = quotient_gradient(&problem, &grid, &u, 0.0).unwrap();
        for j in 0..=32 {
            assert!((g.0[j] - g.0[32 - j]).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_embeds_the_coarse_function() {
        let g = SpaceForm::new(3, -1.0).unwrap();
        let problem = RadialProblem::ball(g, 2.0, 2.0).unwrap();
        let coarse = Grid::uniform(2.0, 32).unwrap();
        let fine = coarse.refine();
        assert_eq!(fine.cells(), 64);
        let u = DiscreteFunction::interpolate(&coarse, |r| (2.0 - r) * (1.0 + r));
        let v = u.transfer(&coarse, &fine);
        let qc = rayleigh_quotient(&problem, &coarse, &u).unwrap();
        let qf = rayleigh_quotient(&problem, &fine, &v).unwrap();
        assert!(((qc - qf) / qc).abs() < 1e-12);
    }

    #[test]
    fn large_hyperbolic_balls_do_not_overflow() {
        let g = SpaceForm::new(5, -1.0).unwrap();
        let problem = RadialProblem::ball(g, 2.0, 400.0).unwrap();
        let grid = Grid::uniform(400.0, 64).unwrap();
        let u = DiscreteFunction::interpolate(&grid, |r| 400.0 - r);
        let q = rayleigh_quotient(&problem, &grid, &u).unwrap();
        assert!(q.is_finite() && q > 0.0);
    }
}
