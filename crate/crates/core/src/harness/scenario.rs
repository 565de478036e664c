use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::SubmersionData;
use crate::eigensolver::{SolverOptions, MIN_CELLS};
use crate::error::{check_exponent, Error, Result};
use crate::geometry::{ProfileTable, Regime, SpaceForm, WarpedProduct, WarpingProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// Closed-form lower bounds only.
    Bound,
    /// Discrete upper bounds only.
    Solve,
    /// Both, over the full `p x R` product; exit status reflects completion.
    Sweep,
    /// Radius with a prescribed eigenvalue.
    Invert,
    /// Both; exit status reflects `lower_bound <= lambda_hat` on every row.
    Verify,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Bound => "bound",
            Self::Solve => "solve",
            Self::Sweep => "sweep",
            Self::Invert => "invert",
            Self::Verify => "verify",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bound" => Ok(Self::Bound),
            "solve" => Ok(Self::Solve),
            "sweep" => Ok(Self::Sweep),
            "invert" => Ok(Self::Invert),
            "verify" => Ok(Self::Verify),
            other => Err(Error::Config(format!("unknown scenario kind {other:?}"))),
        }
    }
}

/// Geometry a scenario runs on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeometrySpec {
    SpaceForm(SpaceForm),
    /// Slabs `[start, start + R]` of a warped product.
    Warped { geom: WarpedProduct, start: f64 },
    Submersion(SubmersionData),
}

/// Raw key-value scenario file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    kind: Option<Kind>,
    geometry: Option<String>,
    n: Option<usize>,
    c: Option<f64>,
    // warped products
    profile: Option<String>,
    slope: Option<f64>,
    amplitude: Option<f64>,
    profile_file: Option<PathBuf>,
    kappa: Option<f64>,
    slab_start: Option<f64>,
    // submersions
    b: Option<f64>,
    alpha: Option<f64>,
    #[serde(default)]
    p: Vec<f64>,
    #[serde(default, alias = "R")]
    radii: Vec<f64>,
    #[serde(default)]
    lambda: Vec<f64>,
    grid: Option<usize>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    tol_r: Option<f64>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: Kind,
    pub geometry: GeometrySpec,
    pub p: Vec<f64>,
    /// Ball radii or slab lengths.
    pub radii: Vec<f64>,
    /// Targets of `invert`.
    pub lambda: Vec<f64>,
    pub grid_m: usize,
    pub opts: SolverOptions,
    pub tol_r: f64,
}

impl Scenario {
    /// Parses a scenario. `kind` overrides the file's own `kind` key;
    /// relative profile paths are resolved against `base_dir`.
    pub fn parse(text: &str, kind: Option<Kind>, base_dir: Option<&Path>) -> Result<Self> {
        let raw: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        let kind = kind
            .or(raw.kind)
            .ok_or_else(|| Error::Config("scenario kind is not set".into()))?;

        let geometry = match raw.geometry.as_deref().unwrap_or("space_form") {
            "space_form" => {
                let n = raw.n.ok_or_else(|| Error::Config("`n` is required".into()))?;
                let c = raw.c.ok_or_else(|| Error::Config("`c` is required".into()))?;
                GeometrySpec::SpaceForm(SpaceForm::new(n, c)?)
            }
            "warped" => {
                let n = raw.n.ok_or_else(|| Error::Config("`n` is required".into()))?;
                let profile = match raw.profile.as_deref().unwrap_or("linear") {
                    "linear" => WarpingProfile::Linear {
                        slope: raw
                            .slope
                            .or(raw.kappa)
                            .ok_or_else(|| Error::Config("linear profile needs `slope`".into()))?,
                    },
                    "log_cosh" => WarpingProfile::LogCosh {
                        slope: raw
                            .slope
                            .ok_or_else(|| Error::Config("log_cosh profile needs `slope`".into()))?,
                        amplitude: raw.amplitude.unwrap_or(0.0),
                    },
                    "table" => {
                        let file = raw.profile_file.as_ref().ok_or_else(|| {
                            Error::Config("table profile needs `profile_file`".into())
                        })?;
                        let path = match base_dir {
                            Some(dir) if file.is_relative() => dir.join(file),
                            _ => file.clone(),
                        };
                        WarpingProfile::Sampled(ProfileTable::from_file(&path).map_err(|e| {
                            Error::Config(format!("profile file {}: {e}", path.display()))
                        })?)
                    }
                    other => return Err(Error::Config(format!("unknown profile {other:?}"))),
                };
                let geom = match raw.kappa {
                    Some(k) => WarpedProduct::with_kappa(n, profile, k)?,
                    None => WarpedProduct::new(n, profile)?,
                };
                let start = raw.slab_start.unwrap_or_else(|| {
                    let (lo, _) = geom.profile().domain();
                    if lo.is_finite() { lo } else { 0.0 }
                });
                GeometrySpec::Warped { geom, start }
            }
            "submersion" => {
                let b = raw.b.ok_or_else(|| Error::Config("`b` is required".into()))?;
                let alpha = raw.alpha.unwrap_or(0.0);
                GeometrySpec::Submersion(SubmersionData::new(b, alpha)?)
            }
            other => return Err(Error::Config(format!("unknown geometry {other:?}"))),
        };

        let defaults = SolverOptions::default();
        let opts = SolverOptions {
            rel_tol: raw.tol.unwrap_or(defaults.rel_tol),
            max_iters: raw.max_iters.unwrap_or(defaults.max_iters),
            ..defaults
        };
        let scenario = Self {
            kind,
            geometry,
            p: raw.p,
            radii: raw.radii,
            lambda: raw.lambda,
            grid_m: raw.grid.unwrap_or(2048),
            opts,
            tol_r: raw.tol_r.unwrap_or(1e-3),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_file(path: impl AsRef<Path>, kind: Option<Kind>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, kind, path.parent())
    }

    /// Checks every value against the preconditions of the module it feeds.
    pub fn validate(&self) -> Result<()> {
        if self.p.is_empty() {
            return Err(Error::Config("the `p` list is empty".into()));
        }
        for &p in &self.p {
            check_exponent(p).map_err(|e| Error::Config(e.to_string()))?;
        }
        let needs_solver = matches!(self.kind, Kind::Solve | Kind::Sweep | Kind::Verify | Kind::Invert);
        if needs_solver {
            self.opts.validate()?;
            if self.grid_m < MIN_CELLS {
                return Err(Error::Config(format!("grid must have at least {MIN_CELLS} cells")));
            }
        }
        let needs_radii = match (&self.geometry, self.kind) {
            (_, Kind::Invert) => false,
            (GeometrySpec::SpaceForm(_), _) => true,
            (GeometrySpec::Warped { .. }, Kind::Bound) => false,
            (GeometrySpec::Warped { .. }, _) => true,
            (GeometrySpec::Submersion(_), _) => false,
        };
        if needs_radii && self.radii.is_empty() {
            return Err(Error::Config("the `R` list is empty".into()));
        }
        for &r in &self.radii {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Config(format!("radius {r} must be positive")));
            }
        }

        match (&self.geometry, self.kind) {
            (GeometrySpec::Submersion(_), Kind::Bound) => {}
            (GeometrySpec::Submersion(_), k) => {
                return Err(Error::Config(format!(
                    "submersion scenarios support only `bound`, not `{k}`"
                )))
            }
            (GeometrySpec::SpaceForm(g), Kind::Invert) => {
                if g.regime() == Regime::Spherical {
                    return Err(Error::Config("`invert` needs curvature c <= 0".into()));
                }
                if self.lambda.is_empty() {
                    return Err(Error::Config("the `lambda` list is empty".into()));
                }
                if !(self.tol_r > 0.0) {
                    return Err(Error::Config("tol_r must be positive".into()));
                }
            }
            (GeometrySpec::Warped { .. }, Kind::Invert) => {
                return Err(Error::Config("`invert` is only defined for space forms".into()))
            }
            (GeometrySpec::SpaceForm(g), kind) => {
                if g.regime() == Regime::Spherical {
                    let k = g.curvature_scale();
                    for &r in &self.radii {
                        let limit = if kind == Kind::Solve {
                            std::f64::consts::PI
                        } else {
                            std::f64::consts::FRAC_PI_2
                        };
                        if k * r >= limit {
                            return Err(Error::Config(format!(
                                "sqrt(c) R = {} must stay below {limit} for `{kind}`",
                                k * r
                            )));
                        }
                    }
                }
            }
            (GeometrySpec::Warped { geom, start }, kind) => {
                if kind != Kind::Solve && geom.kappa() <= 0.0 {
                    return Err(Error::Config("warped bounds need kappa > 0".into()));
                }
                let (lo, hi) = geom.profile().domain();
                for &len in &self.radii {
                    if kind != Kind::Bound && !(*start >= lo && start + len <= hi) {
                        return Err(Error::Config(format!(
                            "slab [{start}, {}] leaves the profile domain [{lo}, {hi}]",
                            start + len
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
