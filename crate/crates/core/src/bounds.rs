//! Closed-form lower bounds for the first Dirichlet eigenvalue of the
//! p-Laplacian.
//!
//! All of them are instances of one estimate: a function with `|∇f| <= a` and
//! `Δ_p f >= b` forces `λ_{1,p} >= b^p / (p^p a^{p(p-1)})`. The geometric
//! bounds only differ in which `(a, b)` the geometry supplies. The
//! distance function on a space form has `a = 1` and
//! `b = (n-1) f_c'(R) / f_c(R)`, a Busemann-type coordinate on a warped
//! product has `a = 1` and `b = (n-1) κ`, and lifting through a Riemannian
//! submersion whose fibers have mean curvature at most `α` lowers `b` by `α`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::geometry::{Regime, SpaceForm, TestFunctionData, WarpedProduct};

/// Scalar data of a Riemannian submersion over a base carrying a unit-gradient
/// function with `ΔB >= b`, whose fibers have mean curvature `|H| <= α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubmersionData {
    b: f64,
    alpha: f64,
}

impl SubmersionData {
    pub fn new(b: f64, alpha: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!("base floor b must be > 0, got {b}")));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mean-curvature bound alpha must be >= 0, got {alpha}"
            )));
        }
        if alpha >= b {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must be smaller than b = {b}; the bound would be vacuous"
            )));
        }
        Ok(Self { b, alpha })
    }

    pub fn base_floor(&self) -> f64 {
        self.b
    }

    pub fn mean_curvature_bound(&self) -> f64 {
        self.alpha
    }

    /// Floor of the lifted function's Laplacian on the total space, `b - α`.
    pub fn lifted_floor(&self) -> f64 {
        self.b - self.alpha
    }
}

/// `b^p / (p^p a^{p(p-1)})`.
pub fn theorem1_bound(data: &TestFunctionData, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let a = data.gradient_bound();
    let b = data.laplacian_floor();
    Ok((b / (p * a.powf(p - 1.0))).powf(p))
}

/// Lower bound for any domain inside the geodesic ball `B_R` of a space form,
/// obtained from the distance to the center.
///
/// Positive curvature requires `sqrt(c) R < π/2` so that the distance
/// function still has positive Laplacian on the whole ball.
pub fn space_form_ball_bound(geom: &SpaceForm, p: f64, radius: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be > 0, got {radius}")));
    }
    if geom.regime() == Regime::Spherical {
        let x = geom.curvature_scale() * radius;
        if x >= FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "sqrt(c) R = {x} must be below π/2 for a positive bound"
            )));
        }
    }
    let b = geom.distance_p_laplacian(radius)?;
    theorem1_bound(&TestFunctionData::new(1.0, b)?, p)
}

/// `((n-1) κ / p)^p`, the fundamental tone of `H^n(-κ^2)` and a lower bound
/// for every simply connected manifold with sectional curvature `<= -κ^2`.
pub fn hyperbolic_fundamental_tone_bound(n: usize, kappa: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {n}")));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")));
    }
    Ok(((n - 1) as f64 * kappa / p).powf(p))
}

/// `((n-1) κ / p)^p` for a warped product whose warping function has `ρ' >= κ`.
pub fn warped_bound(geom: &WarpedProduct, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if geom.kappa() <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "warped bound needs kappa > 0, got {}",
            geom.kappa()
        )));
    }
    theorem1_bound(&TestFunctionData::new(1.0, geom.coordinate_laplacian_floor())?, p)
}

/// `((b - α) / p)^p` on the total space of the submersion.
pub fn submersion_bound(data: &SubmersionData, p: f64) -> Result<f64> {
    theorem1_bound(&TestFunctionData::new(1.0, data.lifted_floor())?, p)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;
    use crate::geometry::WarpingProfile;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn theorem1_examples() {
        let t = |a, b, p| theorem1_bound(&TestFunctionData::new(a, b).unwrap(), p).unwrap();
        assert!(close(t(1.0, 2.0, 2.0), 1.0, 1e-15));
        assert!(close(t(2.0, 4.0, 3.0), 1.0 / 27.0, 1e-15));
        assert!(close(t(2.0, 2.0, 2.0), 0.25, 1e-15));
    }

    #[test]
    fn rejects_bad_exponent() {
        let d = TestFunctionData::new(1.0, 1.0).unwrap();
        for p in [1.0, 0.5, -2.0, f64::NAN] {
            assert!(matches!(theorem1_bound(&d, p), Err(Error::InvalidParameter(_))));
        }
        let g = SpaceForm::new(3, 0.0).unwrap();
        assert!(space_form_ball_bound(&g, 1.0, 1.0).is_err());
        assert!(hyperbolic_fundamental_tone_bound(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn space_form_examples() {
        let b = space_form_ball_bound(&SpaceForm::new(3, 0.0).unwrap(), 2.0, 1.0).unwrap();
        assert!(close(b, 1.0, 1e-15));
        let b = space_form_ball_bound(&SpaceForm::new(2, 1.0).unwrap(), 2.0, PI / 4.0).unwrap();
        assert!(close(b, 0.25, 1e-14));
        let e = 1f64.exp();
        let coth = (e + 1.0 / e) / (e - 1.0 / e);
        let b = space_form_ball_bound(&SpaceForm::new(3, -1.0).unwrap(), 2.0, 1.0).unwrap();
        assert!(close(b, coth * coth, 1e-14));
        assert!((b - 1.724061).abs() < 1e-6);
    }

    #[test]
    fn positive_curvature_radius_limit() {
        let g = SpaceForm::new(3, 4.0).unwrap();
        assert!(space_form_ball_bound(&g, 2.0, PI / 4.0 - 1e-6).is_ok());
        assert!(matches!(space_form_ball_bound(&g, 2.0, PI / 4.0), Err(Error::Domain(_))));
        assert!(matches!(space_form_ball_bound(&g, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(space_form_ball_bound(&g, 2.0, 0.0).is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        assert!(close(hyperbolic_fundamental_tone_bound(3, 1.0, 2.0).unwrap(), 1.0, 1e-15));
        assert!(close(hyperbolic_fundamental_tone_bound(2, 1.0, 2.0).unwrap(), 0.25, 1e-15));
        assert!(close(hyperbolic_fundamental_tone_bound(4, 2.0, 3.0).unwrap(), 8.0, 1e-15));
        assert!(hyperbolic_fundamental_tone_bound(1, 1.0, 2.0).is_err());
        assert!(hyperbolic_fundamental_tone_bound(3, 0.0, 2.0).is_err());
    }

    #[test]
    fn warped_examples() {
        let w = |n, k| WarpedProduct::new(n, WarpingProfile::Linear { slope: k }).unwrap();
        assert!(close(warped_bound(&w(3, 2.0), 2.0).unwrap(), 4.0, 1e-15));
        assert!(close(warped_bound(&w(3, 1.0), 2.0).unwrap(), 1.0, 1e-15));
        assert!(close(warped_bound(&w(2, 3.0), 3.0).unwrap(), 1.0, 1e-15));
        assert!(matches!(warped_bound(&w(3, 0.0), 2.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn submersion_examples() {
        let s = |b, a| SubmersionData::new(b, a).unwrap();
        assert!(close(submersion_bound(&s(2.0, 0.5), 2.0).unwrap(), 0.5625, 1e-15));
        assert!(close(submersion_bound(&s(2.0, 0.0), 2.0).unwrap(), 1.0, 1e-15));
        assert!(close(submersion_bound(&s(3.0, 1.0), 3.0).unwrap(), 8.0 / 27.0, 1e-15));
        assert!(SubmersionData::new(2.0, 2.0).is_err());
        assert!(SubmersionData::new(2.0, 3.0).is_err());
        assert!(SubmersionData::new(2.0, -0.1).is_err());
    }

    #[test]
    fn space_form_limit_is_hyperbolic_tone() {
        for (n, kappa, p) in [(2, 1.0, 2.0), (3, 1.0, 2.0), (5, 2.0, 3.0), (3, 0.5, 1.5)] {
            let g = SpaceForm::hyperbolic(n, kappa).unwrap();
            let far = space_form_ball_bound(&g, p, 50.0 / kappa).unwrap();
            let limit = hyperbolic_fundamental_tone_bound(n, kappa, p).unwrap();
            assert!(close(far, limit, 1e-9));
        }
    }

    #[test]
    fn decreasing_in_radius_for_nonpositive_curvature() {
        for c in [-1.0, -0.3, 0.0] {
            for p in [1.5, 2.0, 4.0] {
                let g = SpaceForm::new(3, c).unwrap();
                let vals: Vec<f64> = (1..60)
                    .map(|i| space_form_ball_bound(&g, p, 0.1 * i as f64).unwrap())
                    .collect();
                assert!(vals.windows(2).all(|w| w[1] < w[0]), "c = {c}, p = {p}");
            }
        }
    }

    #[test]
    fn p2_reduces_to_classical_values() {
        for n in 2..6 {
            for kappa in [0.5, 1.0, 3.0] {
                let m = (n - 1) as f64;
                let want = (m * kappa / 2.0).powi(2);
                assert!(close(hyperbolic_fundamental_tone_bound(n, kappa, 2.0).unwrap(), want, 1e-14));
                let w = WarpedProduct::new(n, WarpingProfile::Linear { slope: kappa }).unwrap();
                assert!(close(warped_bound(&w, 2.0).unwrap(), want, 1e-14));
            }
            for r in [0.5, 1.0, 2.0] {
                let g = SpaceForm::new(n, 0.0).unwrap();
                let want = ((n - 1) as f64 / (2.0 * r)).powi(2);
                assert!(close(space_form_ball_bound(&g, 2.0, r).unwrap(), want, 1e-14));
            }
        }
    }

    #[test]
    fn continuous_in_curvature_at_zero() {
        for n in [2, 3, 5] {
            for p in [1.5, 2.0, 3.0] {
                let r = 1.2;
                let flat = space_form_ball_bound(&SpaceForm::new(n, 0.0).unwrap(), p, r).unwrap();
                for c in [1e-8, -1e-8] {
                    let v = space_form_ball_bound(&SpaceForm::new(n, c).unwrap(), p, r).unwrap();
                    assert!((v - flat).abs() < 1e-6);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn factorization_through_distance_laplacian(
            n in 2usize..7,
            c in -3.0f64..1.0,
            p in 1.05f64..5.0,
            r in 0.05f64..1.5,
        ) {
            let g = SpaceForm::new(n, c).unwrap();
            prop_assume!(c <= 0.0 || c.sqrt() * r < FRAC_PI_2 - 1e-3);
            let direct = space_form_ball_bound(&g, p, r).unwrap();
            let m = (n - 1) as f64;
            let k = c.abs().sqrt();
            let b = if c < 0.0 {
                m * k / (k * r).tanh()
            } else if c == 0.0 {
                m / r
            } else {
                m * k / (k * r).tan()
            };
            let via = theorem1_bound(&TestFunctionData::new(1.0, b).unwrap(), p).unwrap();
            prop_assert!((direct - via).abs() <= 1e-12 * via);
        }

        #[test]
        fn submersion_without_fibers_curvature_is_theorem1(b in 0.01f64..20.0, p in 1.05f64..6.0) {
            let s = submersion_bound(&SubmersionData::new(b, 0.0).unwrap(), p).unwrap();
            let t = theorem1_bound(&TestFunctionData::new(1.0, b).unwrap(), p).unwrap();
            prop_assert_eq!(s, t);
        }
    }
}
