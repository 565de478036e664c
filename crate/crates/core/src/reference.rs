//! Independent reference values for the eigensolver.
//!
//! Nothing in here shares code with the piecewise-linear discretization: the
//! Euclidean values come from power series, the hyperbolic and general `p = 2`
//! radial values from ODE shooting, and the one-dimensional `p != 2` values
//! from the half-period of the p-sine.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::geometry::SpaceForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    BesselSeries,
    PSineClosedForm,
    HyperbolicClosedForm,
    RadialShooting,
}

/// A reference number together with how it was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    pub method: OracleMethod,
    pub certified_digits: u32,
}

/// Sign of `J_ν(x)`, up to the positive factor `(x/2)^ν / Γ(ν+1)`.
fn bessel_reduced_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (nu + k));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > q.sqrt() {
            break;
        }
        if k > 400.0 {
            break;
        }
    }
    sum
}

/// First positive zero `j_{ν,1}` of the Bessel function `J_ν`, `0 <= ν <= 5`.
pub fn bessel_first_zero(nu: f64) -> Result<OracleValue> {
    if !(0.0..=5.0).contains(&nu) {
        return Err(Error::InvalidParameter(format!(
            "Bessel order must lie in [0, 5], got {nu}"
        )));
    }
    // The reduced series is 1 at the origin; scan until it turns negative.
    let step = 0.05;
    let mut lo = 0.0;
    let mut hi = step;
    while bessel_reduced_series(nu, hi) > 0.0 {
        lo = hi;
        hi += step;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if bessel_reduced_series(nu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(OracleValue {
        value: 0.5 * (lo + hi),
        method: OracleMethod::BesselSeries,
        certified_digits: 10,
    })
}

/// Half-period of the p-sine, `2π / (p sin(π/p))`. The first Dirichlet
/// eigenvalue of `-(|u'|^{p-2} u')'` on an interval of length `L` is
/// `(p-1) (π_p / L)^p`.
pub fn pi_p(p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(2.0 * PI / (p * (PI / p).sin()))
}

/// `(p-1) (π_p / L)^p`.
pub fn interval_eigenvalue(p: f64, length: f64) -> Result<OracleValue> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidParameter(format!("length must be > 0, got {length}")));
    }
    Ok(OracleValue {
        value: (p - 1.0) * (pi_p(p)? / length).powf(p),
        method: OracleMethod::PSineClosedForm,
        certified_digits: 14,
    })
}

/// First Dirichlet eigenvalue of the Laplacian on a geodesic ball of radius
/// `R` in `H^3(-1)`: `1 + π^2 / R^2`, with eigenfunction `sin(π r/R) / sinh r`.
pub fn h3_ball_eigenvalue(radius: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be > 0, got {radius}")));
    }
    Ok(1.0 + PI * PI / (radius * radius))
}

/// First Dirichlet eigenvalue of the Laplacian on a Euclidean ball,
/// `(j_{n/2-1,1} / R)^2`.
pub fn euclidean_ball_eigenvalue(n: usize, radius: f64) -> Result<OracleValue> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {n}")));
    }
    let j = bessel_first_zero(n as f64 / 2.0 - 1.0)?;
    Ok(OracleValue {
        value: (j.value / radius).powi(2),
        ..j
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    NonPositive,
}

/// Outcome of integrating the radial eigenvalue ODE from the center to `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOutcome {
    /// `u(R)` for the solution normalized by `u(0) = 1`.
    pub u_end: f64,
    /// Whether `u` reached zero strictly before `R`.
    pub interior_zero: bool,
    pub steps: usize,
}

impl ShootOutcome {
    /// Positive iff `u > 0` on `(0, R]`, which holds exactly when the trial
    /// value is below the first eigenvalue.
    pub fn sign(&self) -> Sign {
        if !self.interior_zero && self.u_end > 0.0 {
            Sign::Positive
        } else {
            Sign::NonPositive
        }
    }
}

const SHOOT_TOL: f64 = 1e-12;

/// Integrates `u'' + (n-1) (f_c'/f_c) u' + λ u = 0`, `u(0) = 1`, `u'(0) = 0`
/// with step-doubling RK4. The coordinate singularity at the center is
/// avoided by starting from a fourth-order series at a small radius.
pub fn shoot_radial(geom: &SpaceForm, radius: f64, lambda: f64) -> Result<ShootOutcome> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("trial eigenvalue must be > 0, got {lambda}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be > 0, got {radius}")));
    }
    if let Some(cut) = geom.cut_locus() {
        if radius >= cut {
            return Err(Error::Domain(format!(
                "radius {radius} is at or beyond the cut locus {cut}"
            )));
        }
    }
    let n = geom.dim() as f64;
    let c = geom.curvature();
    let k = geom.curvature_scale();
    let drift = |r: f64| -> f64 {
        let ratio = match geom.regime() {
            crate::geometry::Regime::Hyperbolic => k / (k * r).tanh(),
            crate::geometry::Regime::Euclidean => 1.0 / r,
            crate::geometry::Regime::Spherical => k / (k * r).tan(),
        };
        (n - 1.0) * ratio
    };
    let rhs = |r: f64, y: [f64; 2]| -> [f64; 2] { [y[1], -drift(r) * y[1] - lambda * y[0]] };

    // u = 1 + a r^2 + b r^4, using f'/f = 1/r - c r/3 + O(r^3)
    let a = -lambda / (2.0 * n);
    let b = a * (2.0 * (n - 1.0) * c / 3.0 - lambda) / (4.0 * (n + 2.0));
    let r0 = (1e-3 * radius).min(1e-3 / lambda.sqrt());
    let mut r = r0;
    let mut y = [1.0 + a * r0 * r0 + b * r0.powi(4), 2.0 * a * r0 + 4.0 * b * r0.powi(3)];

    let rk4 = |r: f64, y: [f64; 2], h: f64| -> [f64; 2] {
        let k1 = rhs(r, y);
        let k2 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };

    let mut h = r0;
    let h_min = 1e-14 * radius;
    let mut interior_zero = false;
    let mut steps = 0;
    while r < radius {
        let last = r + h >= radius;
        let step = if last { radius - r } else { h };
        let full = rk4(r, y, step);
        let half = rk4(r, y, 0.5 * step);
        let two_half = rk4(r + 0.5 * step, half, 0.5 * step);
        let scale = y[0].abs().max(y[1].abs() * step).max(1e-3);
        let err = (two_half[0] - full[0]).abs().max((two_half[1] - full[1]).abs() * step) / scale;
        if err <= SHOOT_TOL || step <= h_min {
            if step <= h_min && err > SHOOT_TOL {
                return Err(Error::StepUnderflow(r));
            }
            // Richardson-corrected fourth-order update
            y = [
                two_half[0] + (two_half[0] - full[0]) / 15.0,
                two_half[1] + (two_half[1] - full[1]) / 15.0,
            ];
            r = if last { radius } else { r + step };
            steps += 1;
            if r < radius && y[0] <= 0.0 {
                interior_zero = true;
            }
            let grow = if err == 0.0 { 4.0 } else { (0.9 * (SHOOT_TOL / err).powf(0.2)).min(4.0) };
            h = step * grow;
        } else {
            h = step * (0.9 * (SHOOT_TOL / err).powf(0.2)).max(0.1);
        }
    }
    Ok(ShootOutcome { u_end: y[0], interior_zero, steps })
}

/// First Dirichlet eigenvalue of the Laplacian on the geodesic ball `B_R` of a
/// space form, by bisection on the sign of [`shoot_radial`].
pub fn first_radial_eigenvalue(geom: &SpaceForm, radius: f64) -> Result<OracleValue> {
    let mut lo = 0.0;
    let mut hi = 1.0 / (radius * radius);
    while shoot_radial(geom, radius, hi)?.sign() == Sign::Positive {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoBracket("radial eigenvalue above 1e12".into()));
        }
    }
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        match shoot_radial(geom, radius, mid)?.sign() {
            Sign::Positive => lo = mid,
            Sign::NonPositive => hi = mid,
        }
    }
    Ok(OracleValue {
        value: 0.5 * (lo + hi),
        method: OracleMethod::RadialShooting,
        certified_digits: 8,
    })
}
