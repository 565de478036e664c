use fundamental_tone::bounds::theorem1_bound;
use fundamental_tone::eigensolver::{Discretization, Grid, RadialProblem};
use fundamental_tone::geometry::{SpaceForm, TestFunctionData};
use proptest::prelude::*;

const GRID_M: usize = 64;

fn ball_problem(p: f64) -> (RadialProblem, Grid) {
    let geom = SpaceForm::new(3, -1.0).unwrap();
    let problem = RadialProblem::ball(geom, p, 1.5).unwrap();
    let grid = Grid::uniform(1.5, GRID_M).unwrap();
    (problem, grid)
}

/// Positive interior values, zero at the Dirichlet node.
fn positive_function() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05..2.0f64, GRID_M).prop_map(|mut v| {
        v.push(0.0);
        v
    })
}

fn signed_function() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, GRID_M)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(|mut v| {
            v.push(0.0);
            v
        })
}

fn relative_gradient_error(p: f64, u: &[f64]) -> f64 {
    let (problem, grid) = ball_problem(p);
    let disc = Discretization::new(&problem, &grid).unwrap();
    let eps = if p < 2.0 { 1e-4 } else { 0.0 };
    let grad = disc.gradient(u, eps).unwrap();
    let mut diff2 = 0.0;
    let mut norm2 = 0.0;
    for j in disc.free() {
        let step = 1e-6 * u[j].abs().max(1e-2);
        let mut plus = u.to_vec();
        let mut minus = u.to_vec();
        plus[j] += step;
        minus[j] -= step;
        let fd = (disc.regularized_quotient(&plus, eps).unwrap()
            - disc.regularized_quotient(&minus, eps).unwrap())
            / (2.0 * step);
        diff2 += (grad[j] - fd).powi(2);
        norm2 += grad[j].powi(2);
    }
    (diff2 / norm2).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn theorem1_scaling_invariance(
        a in 0.05..5.0f64,
        b in 0.01..20.0f64,
        p in 1.05..6.0f64,
        s in 0.1..10.0f64,
    ) {
        // u -> s u scales |∇u| by s and Δ_p u by s^{p-1}
        let base = theorem1_bound(&TestFunctionData::new(a, b).unwrap(), p).unwrap();
        let scaled = theorem1_bound(&TestFunctionData::new(s * a, s.powf(p - 1.0) * b).unwrap(), p).unwrap();
        let scale = base.abs().max(1e-300);
        prop_assert!((base - scaled).abs() <= 1e-12 * scale, "{} vs {}", base, scaled);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gradient_matches_finite_differences_p1_5(u in positive_function()) {
        let err = relative_gradient_error(1.5, &u);
        prop_assert!(err < 1e-6, "relative error {}", err);
    }

    #[test]
    fn gradient_matches_finite_differences_p2(u in positive_function()) {
        let err = relative_gradient_error(2.0, &u);
        prop_assert!(err < 1e-6, "relative error {}", err);
    }

    #[test]
    fn gradient_matches_finite_differences_p2_7(u in positive_function()) {
        let err = relative_gradient_error(2.7, &u);
        prop_assert!(err < 1e-6, "relative error {}", err);
    }

    #[test]
    fn gradient_matches_finite_differences_p4(u in positive_function()) {
        let err = relative_gradient_error(4.0, &u);
        prop_assert!(err < 1e-6, "relative error {}", err);
    }

    #[test]
    fn quotient_is_zero_homogeneous(
        u in signed_function(),
        t in prop_oneof![-100.0..-0.01f64, 0.01..100.0f64],
        p in prop::sample::select(vec![1.5, 2.0, 2.7, 4.0]),
    ) {
        let (problem, grid) = ball_problem(p);
        let disc = Discretization::new(&problem, &grid).unwrap();
        let scaled: Vec<f64> = u.iter().map(|v| t * v).collect();
        let q = disc.quotient(&u).unwrap();
        let qs = disc.quotient(&scaled).unwrap();
        prop_assert!((q - qs).abs() <= 1e-12 * q, "{} vs {}", q, qs);
        let r = disc.regularized_quotient(&u, 1e-3).unwrap();
        let rs = disc.regularized_quotient(&scaled, 1e-3).unwrap();
        prop_assert!((r - rs).abs() <= 1e-12 * r, "{} vs {}", r, rs);
    }

    #[test]
    fn absolute_value_does_not_raise_the_quotient(
        u in signed_function(),
        p in prop::sample::select(vec![1.5, 2.0, 2.7, 4.0]),
    ) {
        let (problem, grid) = ball_problem(p);
        let disc = Discretization::new(&problem, &grid).unwrap();
        let abs: Vec<f64> = u.iter().map(|v| v.abs()).collect();
        let q = disc.quotient(&u).unwrap();
        let qa = disc.quotient(&abs).unwrap();
        prop_assert!(qa <= q * (1.0 + 1e-12), "{} > {}", qa, q);
    }
}
