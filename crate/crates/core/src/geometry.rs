//! Model geometries and their radial quantities.
//!
//! A [`SpaceForm`] is the simply connected manifold of constant sectional
//! curvature `c` in dimension `n`. In geodesic polar coordinates its metric is
//! `dr^2 + f_c(r)^2 dω^2`, so everything the eigenvalue machinery needs (the
//! radial volume density and the Laplacian of the distance function) is a
//! function of `f_c` alone.
//!
//! A [`WarpedProduct`] is `R x N` with metric `dt^2 + e^{2ρ(t)} g_0`. Functions of
//! `t` alone see the volume density `e^{(n-1)ρ(t)}`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Curvature regime of a space form. Exact zero is Euclidean; there is no
/// snapping of tiny curvatures to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Hyperbolic,
    Euclidean,
    Spherical,
}

/// Simply connected space form `M^n(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    n: usize,
    c: f64,
}

impl SpaceForm {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "curvature must be finite, got {c}"
            )));
        }
        Ok(Self { n, c })
    }

    /// Hyperbolic space `H^n(-κ^2)`.
    pub fn hyperbolic(n: usize, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        Self::new(n, -kappa * kappa)
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn curvature(&self) -> f64 {
        self.c
    }

    pub fn regime(&self) -> Regime {
        if self.c < 0.0 {
            Regime::Hyperbolic
        } else if self.c == 0.0 {
            Regime::Euclidean
        } else {
            Regime::Spherical
        }
    }

    /// `sqrt(|c|)`.
    pub fn curvature_scale(&self) -> f64 {
        self.c.abs().sqrt()
    }

    /// Distance to the cut locus of a point, `π/sqrt(c)`; `None` when `c <= 0`.
    pub fn cut_locus(&self) -> Option<f64> {
        (self.c > 0.0).then(|| PI / self.c.sqrt())
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
        }
        if let Some(cut) = self.cut_locus() {
            if r >= cut {
                return Err(Error::Domain(format!(
                    "radius {r} is at or beyond the cut locus {cut} for c = {}",
                    self.c
                )));
            }
        }
        Ok(())
    }

    /// Polar metric coefficient `f_c(r)`.
    pub fn metric_coefficient(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let k = self.curvature_scale();
        Ok(match self.regime() {
            Regime::Hyperbolic => (k * r).sinh() / k,
            Regime::Euclidean => r,
            Regime::Spherical => (k * r).sin() / k,
        })
    }

    /// `f_c'(r)`.
    pub fn metric_coefficient_derivative(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let k = self.curvature_scale();
        Ok(match self.regime() {
            Regime::Hyperbolic => (k * r).cosh(),
            Regime::Euclidean => 1.0,
            Regime::Spherical => (k * r).cos(),
        })
    }

    /// `(n-1) f_c'(r) / f_c(r)`: the Laplacian of the distance to the center,
    /// which for a unit-gradient function is also its p-Laplacian for every p.
    pub fn distance_p_laplacian(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        if r == 0.0 {
            return Err(Error::Domain(
                "the distance function is singular at the center (r = 0)".into(),
            ));
        }
        let k = self.curvature_scale();
        let m = (self.n - 1) as f64;
        Ok(match self.regime() {
            Regime::Hyperbolic => m * k / (k * r).tanh(),
            Regime::Euclidean => m / r,
            Regime::Spherical => m * k / (k * r).tan(),
        })
    }

    /// Radial volume density `f_c(r)^{n-1}`.
    pub fn ball_volume_weight(&self, r: f64) -> Result<f64> {
        Ok(self.metric_coefficient(r)?.powi(self.n as i32 - 1))
    }

    /// `ln f_c(r)^{n-1}`, finite for large hyperbolic radii where the
    /// density itself overflows. `-inf` at `r = 0`.
    pub fn log_ball_volume_weight(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        if r == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let k = self.curvature_scale();
        let ln_f = match self.regime() {
            Regime::Hyperbolic => {
                let x = k * r;
                // ln sinh x = x + ln(1 - e^{-2x}) - ln 2
                x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - k.ln()
            }
            Regime::Euclidean => r.ln(),
            Regime::Spherical => ((k * r).sin() / k).ln(),
        };
        Ok((self.n - 1) as f64 * ln_f)
    }
}

impl fmt::Display for SpaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M^{}({})", self.n, self.c)
    }
}

/// A warping function `ρ` sampled as a table of `(t, ρ(t))` pairs and
/// interpolated piecewise-linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    t: Vec<f64>,
    rho: Vec<f64>,
}

impl ProfileTable {
    pub fn new(t: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if t.len() != rho.len() {
            return Err(Error::InvalidParameter(format!(
                "profile table has {} abscissae but {} values",
                t.len(),
                rho.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::InvalidParameter(
                "profile table needs at least two rows".into(),
            ));
        }
        if t.iter().chain(&rho).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("profile table has non-finite entries".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "profile table abscissae must be strictly increasing".into(),
            ));
        }
        Ok(Self { t, rho })
    }

    /// Parses the two-column `t rho` text format. Blank lines and anything
    /// after `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Vec::new();
        let mut rho = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected two columns `t rho`, found {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    msg: format!("{s:?}: {e}"),
                })
            };
            t.push(parse(fields[0])?);
            rho.push(parse(fields[1])?);
        }
        Self::new(t, rho)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    /// Smallest difference quotient of the table.
    pub fn min_slope(&self) -> f64 {
        self.t
            .windows(2)
            .zip(self.rho.windows(2))
            .map(|(t, r)| (r[1] - r[0]) / (t[1] - t[0]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::Domain(format!(
                "t = {t} is outside the sampled range [{lo}, {hi}]"
            )));
        }
        // index of the first abscissa strictly greater than t
        let j = self.t.partition_point(|&x| x <= t).clamp(1, self.t.len() - 1);
        let (t0, t1) = (self.t[j - 1], self.t[j]);
        let s = (t - t0) / (t1 - t0);
        Ok(self.rho[j - 1] + s * (self.rho[j] - self.rho[j - 1]))
    }
}

/// Warping function `ρ` of a warped product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarpingProfile {
    /// `ρ(t) = slope * t`. With `slope = κ` and `N` a round sphere this is the
    /// hyperbolic-like example with some positive sectional curvatures.
    Linear { slope: f64 },
    /// `ρ(t) = slope * t + amplitude * ln cosh t`, so `ρ'(t) = slope + amplitude * tanh t`.
    LogCosh { slope: f64, amplitude: f64 },
    Sampled(ProfileTable),
}

impl WarpingProfile {
    pub fn rho(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("t must be finite, got {t}")));
        }
        match self {
            Self::Linear { slope } => Ok(slope * t),
            Self::LogCosh { slope, amplitude } => {
                // ln cosh t = |t| + ln(1 + e^{-2|t|}) - ln 2
                let a = t.abs();
                Ok(slope * t
                    + amplitude * (a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2))
            }
            Self::Sampled(table) => table.eval(t),
        }
    }

    /// Largest constant known to bound `ρ'` from below on the whole domain.
    pub fn derivative_floor(&self) -> f64 {
        match self {
            Self::Linear { slope } => *slope,
            Self::LogCosh { slope, amplitude } => slope - amplitude.abs(),
            Self::Sampled(table) => table.min_slope(),
        }
    }

    /// Interval on which `ρ` is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::Sampled(table) => table.domain(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// `R x N^{n-1}` with metric `dt^2 + e^{2ρ(t)} g_0` and a certified floor
/// `κ <= ρ'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpedProduct {
    n: usize,
    profile: WarpingProfile,
    kappa: f64,
}

impl WarpedProduct {
    /// Builds the product with `κ` set to the profile's own derivative floor.
    pub fn new(n: usize, profile: WarpingProfile) -> Result<Self> {
        let kappa = profile.derivative_floor();
        Self::with_kappa(n, profile, kappa)
    }

    /// Builds the product with a caller-supplied floor, checked against the
    /// profile (for tables, against every difference quotient).
    pub fn with_kappa(n: usize, profile: WarpingProfile, kappa: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be finite and >= 0, got {kappa}"
            )));
        }
        let floor = profile.derivative_floor();
        // small relative slack for tables whose quotients equal kappa up to rounding
        if kappa > floor + 1e-12 * floor.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa = {kappa} exceeds the profile's derivative floor {floor}"
            )));
        }
        Ok(Self { n, profile, kappa })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn profile(&self) -> &WarpingProfile {
        &self.profile
    }

    /// `(n-1) ρ(t)`.
    pub fn log_volume_weight(&self, t: f64) -> Result<f64> {
        Ok((self.n - 1) as f64 * self.profile.rho(t)?)
    }

    /// Volume density `e^{(n-1)ρ(t)}` seen by functions of `t` alone.
    pub fn warped_volume_weight(&self, t: f64) -> Result<f64> {
        Ok(self.log_volume_weight(t)?.exp())
    }

    /// Laplacian of the coordinate function `F(t, x) = t`, which is `(n-1) ρ'(t)`
    /// and is bounded below by `(n-1) κ`.
    pub fn coordinate_laplacian_floor(&self) -> f64 {
        (self.n - 1) as f64 * self.kappa
    }
}

/// Bounds satisfied by a Theorem-1 test function `f`: `|∇f| <= a` and `Δ_p f >= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionData {
    a: f64,
    b: f64,
}

impl TestFunctionData {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("gradient bound a must be > 0, got {a}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "p-Laplacian floor b must be > 0, got {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn gradient_bound(&self) -> f64 {
        self.a
    }

    pub fn laplacian_floor(&self) -> f64 {
        self.b
    }
}
