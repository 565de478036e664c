//! Scenario runner behind the `ftone` command line tool.
//!
//! A scenario names a geometry, lists of exponents and radii, and what to
//! compute. Every `(p, R)` pair (or `(p, λ)` pair for `invert`) becomes an
//! independent row; rows run in parallel on a dedicated pool and are
//! reported in canonical order, so reports are byte-identical across runs
//! and job counts.

mod report;
mod scenario;

use rayon::prelude::*;

pub use report::{format_float, BoundCertificate, Report, CSV_COLUMNS, PASS_SLACK};
pub use scenario::{GeometrySpec, Kind, Scenario};

use crate::bounds::{space_form_ball_bound, submersion_bound, warped_bound};
use crate::eigensolver::{solve_ball, solve_warped_slab, EigenResult};
use crate::error::{Error, Result};
use crate::inverse::{radius_for_eigenvalue, InverseQuery};

/// Environment variable read by the CLI for the default job count.
pub const JOBS_ENV: &str = "FTONE_JOBS";

#[derive(Debug, Clone, Copy, PartialEq)]
enum Case {
    Exponent { p: f64 },
    Radius { p: f64, r: f64 },
    Target { p: f64, lambda: f64 },
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn cases(s: &Scenario) -> Vec<Case> {
    let ps = sorted(&s.p);
    let per_exponent = match (&s.geometry, s.kind) {
        (_, Kind::Invert) => {
            let targets = sorted(&s.lambda);
            return ps
                .iter()
                .flat_map(|&p| targets.iter().map(move |&lambda| Case::Target { p, lambda }))
                .collect();
        }
        (GeometrySpec::Submersion(_), _) => true,
        (GeometrySpec::Warped { .. }, Kind::Bound) => true,
        _ => false,
    };
    if per_exponent {
        return ps.iter().map(|&p| Case::Exponent { p }).collect();
    }
    let radii = sorted(&s.radii);
    ps.iter()
        .flat_map(|&p| radii.iter().map(move |&r| Case::Radius { p, r }))
        .collect()
}

fn record_solve(row: &mut BoundCertificate, res: &EigenResult) {
    row.lambda_hat = Some(res.lambda_hat);
    row.iterations = Some(res.iterations);
    row.converged = Some(res.converged);
    row.m = Some(res.grid_m);
    row.epsilon_final = Some(res.epsilon_final);
}

fn run_case(s: &Scenario, case: Case) -> BoundCertificate {
    let p = match case {
        Case::Exponent { p } | Case::Radius { p, .. } | Case::Target { p, .. } => p,
    };
    let mut row = BoundCertificate::empty(s.kind, p);
    match &s.geometry {
        GeometrySpec::SpaceForm(g) => {
            row.n = Some(g.dim());
            row.c_or_kappa = Some(g.curvature());
        }
        GeometrySpec::Warped { geom, .. } => {
            row.n = Some(geom.dim());
            row.c_or_kappa = Some(geom.kappa());
        }
        GeometrySpec::Submersion(_) => {}
    }
    if let Err(e) = fill_case(s, case, &mut row) {
        row.error = Some(e.to_string());
        if s.kind == Kind::Verify {
            row.pass = Some(false);
        }
    }
    row
}

fn fill_case(s: &Scenario, case: Case, row: &mut BoundCertificate) -> Result<()> {
    let wants_lower = matches!(s.kind, Kind::Bound | Kind::Verify | Kind::Sweep);
    let wants_upper = matches!(s.kind, Kind::Solve | Kind::Verify | Kind::Sweep);
    match (case, &s.geometry) {
        (Case::Target { p, lambda }, GeometrySpec::SpaceForm(g)) => {
            let mut q = InverseQuery::new(*g, p, lambda);
            q.tol_r = s.tol_r;
            q.grid_m = s.grid_m;
            q.opts = s.opts.clone();
            row.lambda_target = Some(lambda);
            row.m = Some(s.grid_m);
            row.lower_bound = Some(q.asymptotic_floor()?);
            let out = radius_for_eigenvalue(&q)?;
            row.radius = Some(out.radius);
            row.lambda_hat = Some(out.lambda_at_radius);
            row.certify();
        }
        (Case::Radius { p, r }, GeometrySpec::SpaceForm(g)) => {
            row.radius = Some(r);
            if wants_lower {
                row.lower_bound = Some(space_form_ball_bound(g, p, r)?);
            }
            if wants_upper {
                record_solve(row, &solve_ball(g, p, r, s.grid_m, &s.opts)?);
            }
            row.certify();
        }
        (Case::Radius { p, r }, GeometrySpec::Warped { geom, start }) => {
            row.radius = Some(r);
            if wants_lower {
                row.lower_bound = Some(warped_bound(geom, p)?);
            }
            if wants_upper {
                record_solve(row, &solve_warped_slab(geom, p, *start, r, s.grid_m, &s.opts)?);
            }
            row.certify();
        }
        (Case::Exponent { p }, GeometrySpec::Warped { geom, .. }) => {
            row.lower_bound = Some(warped_bound(geom, p)?);
        }
        (Case::Exponent { p }, GeometrySpec::Submersion(data)) => {
            row.lower_bound = Some(submersion_bound(data, p)?);
        }
        (case, geometry) => {
            return Err(Error::Config(format!("case {case:?} does not apply to {geometry:?}")));
        }
    }
    Ok(())
}

/// Runs every row of the scenario on `jobs` worker threads.
pub fn run_scenario_with_jobs(s: &Scenario, jobs: usize) -> Result<Report> {
    s.validate()?;
    let cases = cases(s);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| cases.par_iter().map(|&c| run_case(s, c)).collect());
    Ok(Report { scenario: s.clone(), rows })
}

/// Runs every row of the scenario using all available cores.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    run_scenario_with_jobs(s, jobs)
}

/// Lower bound and discrete eigenvalue over the full `p x R` product.
pub fn sweep(s: &Scenario, jobs: usize) -> Result<Report> {
    if s.radii.is_empty() || s.p.is_empty() {
        return Err(Error::Config("a sweep needs nonempty `p` and `R` lists".into()));
    }
    let s = Scenario { kind: Kind::Sweep, ..s.clone() };
    run_scenario_with_jobs(&s, jobs)
}
