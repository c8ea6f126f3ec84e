//! Closed-form geometry of meridian surfaces X(u, v) = f(u) r(v) + g(u) e₄.
//!
//! In the frame X = X_u, Y = t, N₁ = n, N₂ = −g' r + f' e₄ the surface has
//! E = 1, F = 0, G = f² and
//!
//! ```text
//! A_{N₁} = diag(0, κ/f),   A_{N₂} = diag(κ_α, g'/f)
//! K = κ_α g'/f
//! H⃗ = κ/(2f) N₁ + (κ_α f + g')/(2f) N₂
//! ```

use serde::Serialize;

use crate::diff;
use crate::error::{Error, Result};
use crate::euclid::Vec4;
use crate::patch::{Mat2, Patch};
use crate::profile::{Profile, ProfileJet, MIN_RADIUS};
use crate::spherical_curve::{FrenetSample, SphericalCurve};
use crate::Rect;

/// Smallest admissible |g'|.
pub const MIN_G_PRIME: f64 = 1e-6;
/// κ² + (κ_α f + g')² below this marks a minimal point.
pub const MINIMAL_TOL: f64 = 1e-20;
/// Validation samples along u at construction.
const VALIDATION_SAMPLES: usize = 257;

#[derive(Debug, Clone)]
pub struct MeridianSurface {
    curve: SphericalCurve,
    profile: Profile,
    domain: Rect,
}

/// The orthonormal frame {X, Y, N₁, N₂}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianFrame {
    pub x: Vec4,
    pub y: Vec4,
    pub n1: Vec4,
    pub n2: Vec4,
}

impl MeridianFrame {
    pub fn vectors(&self) -> [Vec4; 4] {
        [self.x, self.y, self.n1, self.n2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianCurvature {
    #[serde(rename = "K")]
    pub k: f64,
    /// Component of H⃗ along N₁.
    pub h1: f64,
    /// Component of H⃗ along N₂.
    pub h2: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub a1: Mat2,
    pub a2: Mat2,
    pub kappa: f64,
    pub kappa_alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeingartenPartials {
    pub k_u: f64,
    pub k_v: f64,
    pub h_u: f64,
    pub h_v: f64,
}

impl WeingartenPartials {
    /// K_u H_v − K_v H_u.
    pub fn jacobian(&self) -> f64 {
        self.k_u * self.h_v - self.k_v * self.h_u
    }
}

impl MeridianSurface {
    /// Builds the surface over `profile.domain() × curve.domain()`,
    /// rejecting profiles with f ≤ 1e-6 or |g'| < 1e-6 anywhere on I.
    pub fn new(curve: SphericalCurve, profile: Profile) -> Result<Self> {
        let domain = Rect::new(profile.domain(), curve.domain());
        for u in domain.u.linspace(VALIDATION_SAMPLES) {
            let j = profile.jet(u);
            if !(j.f > MIN_RADIUS) {
                return Err(Error::NonRegular {
                    u,
                    reason: format!("meridian radius f = {:e} must be positive", j.f),
                });
            }
            if !(j.g1.abs() >= MIN_G_PRIME) {
                return Err(Error::GPrimeZero { u, value: j.g1 });
            }
        }
        Ok(Self {
            curve,
            profile,
            domain,
        })
    }

    pub fn curve(&self) -> &SphericalCurve {
        &self.curve
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn rect(&self) -> Rect {
        self.domain
    }

    /// The same surface with the directrix normal flipped (κ → −κ).
    pub fn with_flipped_normal(&self) -> Self {
        Self {
            curve: self.curve.with_flipped_normal(),
            ..self.clone()
        }
    }

    pub fn embed(&self, u: f64, v: f64) -> Vec4 {
        let r = self.curve.position(v).lift();
        r * self.profile.f(u) + Vec4::e4() * self.profile.g(u)
    }

    fn frame_from(jet: &ProfileJet, fr: &FrenetSample) -> MeridianFrame {
        let r = fr.r.lift();
        let e4 = Vec4::e4();
        MeridianFrame {
            x: r * jet.f1 + e4 * jet.g1,
            y: fr.t.lift(),
            n1: fr.n.lift(),
            n2: r * (-jet.g1) + e4 * jet.f1,
        }
    }

    pub fn analytic_frame(&self, u: f64, v: f64) -> Result<MeridianFrame> {
        let fr = self.curve.frenet(v)?;
        Ok(Self::frame_from(&self.profile.jet(u), &fr))
    }

    /// {N₁, N₂} from the analytic frame.
    pub fn analytic_normals(&self, u: f64, v: f64) -> Result<[Vec4; 2]> {
        let f = self.analytic_frame(u, v)?;
        Ok([f.n1, f.n2])
    }

    fn check_point(jet: &ProfileJet, u: f64) -> Result<()> {
        if !(jet.f > MIN_RADIUS) {
            return Err(Error::NonRegular {
                u,
                reason: format!("f = {:e}", jet.f),
            });
        }
        if !(jet.g1.abs() > MIN_G_PRIME) {
            return Err(Error::GPrimeZero { u, value: jet.g1 });
        }
        Ok(())
    }

    pub fn closed_curvature(&self, u: f64, v: f64) -> Result<MeridianCurvature> {
        let jet = self.profile.jet(u);
        Self::check_point(&jet, u)?;
        let kappa = self.curve.frenet(v)?.kappa;
        let kappa_alpha = jet.kappa_alpha();
        let f = jet.f;
        let k = kappa_alpha * jet.g1 / f;
        let h1 = kappa / (2.0 * f);
        let h2 = (kappa_alpha * f + jet.g1) / (2.0 * f);
        let h = (kappa * kappa + (kappa_alpha * f + jet.g1).powi(2)).sqrt() / (2.0 * f);
        Ok(MeridianCurvature {
            k,
            h1,
            h2,
            h,
            a1: [[0.0, 0.0], [0.0, kappa / f]],
            a2: [[kappa_alpha, 0.0], [0.0, jet.g1 / f]],
            kappa,
            kappa_alpha,
        })
    }

    /// Closed-form Gauss curvature K(u) = κ_α g'/f; independent of v.
    pub fn gauss_curvature(&self, u: f64, _v: f64) -> f64 {
        let jet = self.profile.jet(u);
        jet.kappa_alpha() * jet.g1 / jet.f
    }

    /// Closed-form mean curvature H(u, v).
    pub fn mean_curvature(&self, u: f64, v: f64) -> Result<f64> {
        let jet = self.profile.jet(u);
        let kappa = self.curve.frenet(v)?.kappa;
        Ok((kappa * kappa + (jet.kappa_alpha() * jet.f + jet.g1).powi(2)).sqrt() / (2.0 * jet.f))
    }

    /// K_u = −(f f''' − f' f'')/f², K_v = 0,
    /// H_v = κκ' / (2f √(κ² + (κ_α f + g')²)), H_u by central differences.
    pub fn weingarten_partials(&self, u: f64, v: f64) -> Result<WeingartenPartials> {
        let jet = self.profile.jet(u);
        Self::check_point(&jet, u)?;
        let fr = self.curve.frenet(v)?;
        let f = jet.f;
        let shifted = jet.kappa_alpha() * f + jet.g1;
        let radicand = fr.kappa * fr.kappa + shifted * shifted;
        if radicand < MINIMAL_TOL {
            return Err(Error::MinimalPoint { u, v });
        }
        let k_u = -jet.ode_residual() / (f * f);
        let h_v = fr.kappa * fr.kappa_prime / (2.0 * f * radicand.sqrt());
        let step = 1e-4 * u.abs().max(1.0);
        let kappa = fr.kappa;
        let h_at = |x: f64| {
            let j = self.profile.jet(x);
            (kappa * kappa + (j.kappa_alpha() * j.f + j.g1).powi(2)).sqrt() / (2.0 * j.f)
        };
        let h_u = diff::five_point(h_at, u, step);
        Ok(WeingartenPartials {
            k_u,
            k_v: 0.0,
            h_u,
            h_v,
        })
    }
}

impl Patch for MeridianSurface {
    fn position(&self, u: f64, v: f64) -> Vec4 {
        self.embed(u, v)
    }

    fn domain(&self) -> Rect {
        self.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patch::{self, curvature_in_frame};
    use crate::profile::{circle_arc_profile, cosh_profile, profile_from_expr, FamilyParams};
    use crate::Interval;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn sphere_meridian() -> MeridianSurface {
        let profile = circle_arc_profile(
            &FamilyParams::circle(1.0, -FRAC_PI_2, 0.0),
            Interval::new(0.3, PI - 0.3),
            1.0,
        )
        .unwrap();
        MeridianSurface::new(
            SphericalCurve::great_circle(Interval::new(0.0, 6.0)),
            profile,
        )
        .unwrap()
    }

    #[test]
    fn embed_examples() {
        let m = sphere_meridian();
        assert!((m.embed(FRAC_PI_2, 0.0) - Vec4::new(1.0, 0.0, 0.0, 0.0)).norm() < 1e-15);
        for k in 0..10 {
            let (u, v) = (0.5 + 0.1 * k as f64, 0.6 * k as f64);
            let j = m.profile().jet(u);
            assert!((m.embed(u, v).norm_squared() - (j.f * j.f + j.g * j.g)).abs() < 1e-14);
        }
        let line =
            crate::profile::Profile::line(FRAC_PI_4, 1.0, 0.0, Interval::new(-0.5, 2.0), 1.0)
                .unwrap();
        let m = MeridianSurface::new(SphericalCurve::great_circle(Interval::new(0.0, 3.0)), line)
            .unwrap();
        assert!((m.embed(0.0, FRAC_PI_2) - Vec4::new(0.0, 1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!((m.profile().jet(1.0).f - (FRAC_1_SQRT_2 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn analytic_frame_is_orthonormal() {
        let curve = SphericalCurve::spiral(0.2, Interval::new(0.0, 3.0)).unwrap();
        let profile = profile_from_expr("0.5*sin(u)+2", Interval::new(0.0, 3.0), 1.0).unwrap();
        let m = MeridianSurface::new(curve, profile).unwrap();
        for k in 0..25 {
            let (u, v) = (0.1 + 0.11 * k as f64, 2.9 - 0.1 * k as f64);
            let f = m.analytic_frame(u, v).unwrap().vectors();
            for i in 0..4 {
                for j in 0..4 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    assert!((f[i].dot(f[j]) - delta).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn great_circle_normal_is_constant() {
        let m = sphere_meridian();
        let n = m.analytic_frame(1.0, 0.4).unwrap().n1;
        assert_eq!(n, Vec4::new(0.0, 0.0, 1.0, 0.0));
        let f = m.analytic_frame(FRAC_PI_2, 1.3).unwrap();
        assert!((f.n2 + m.curve().position(1.3).lift()).norm() < 1e-15);
    }

    #[test]
    fn sphere_meridian_curvatures() {
        let m = sphere_meridian();
        for k in 0..20 {
            let (u, v) = (0.4 + 0.11 * k as f64, 0.3 * k as f64);
            let c = m.closed_curvature(u, v).unwrap();
            assert!((c.k - 1.0).abs() < 1e-14);
            assert!((c.h - 1.0).abs() < 1e-14);
            let n = patch::curvature(&m, u, v).unwrap();
            assert!((n.k - 1.0).abs() < 1e-6 && (n.h - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cosh_family_has_constant_negative_curvature() {
        let profile = cosh_profile(
            &FamilyParams::cosh(0.5, 2.0, 0.0),
            Interval::new(-1.0, 1.0),
            1.0,
        )
        .unwrap();
        let curve = SphericalCurve::spiral(0.2, Interval::new(0.5, 2.5)).unwrap();
        let m = MeridianSurface::new(curve, profile).unwrap();
        for u in Interval::new(-1.0, 1.0).interior(11) {
            for v in Interval::new(0.5, 2.5).interior(5) {
                let c = m.closed_curvature(u, v).unwrap();
                assert!((c.k + 0.25).abs() < 1e-12);
                let n = patch::curvature(&m, u, v).unwrap();
                assert!((n.k + 0.25).abs() < 1e-6, "{}", n.k);
                let p = m.weingarten_partials(u, v).unwrap();
                assert!(p.k_u.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn line_profile_is_flat_for_any_directrix() {
        let line =
            crate::profile::Profile::line(0.6, 0.5, 0.0, Interval::new(0.5, 3.0), 1.0).unwrap();
        let m = MeridianSurface::new(
            SphericalCurve::spiral(0.3, Interval::new(0.0, 2.0)).unwrap(),
            line,
        )
        .unwrap();
        for u in [0.6, 1.5, 2.9] {
            assert_eq!(m.closed_curvature(u, 1.0).unwrap().k, 0.0);
        }
    }

    #[test]
    fn coefficients_match_generic_pipeline_in_analytic_frame() {
        let curve = SphericalCurve::small_circle(FRAC_PI_4, Interval::new(0.0, 2.0)).unwrap();
        let profile = profile_from_expr("0.5*sin(u)+2", Interval::new(0.0, 3.0), 1.0).unwrap();
        let m = MeridianSurface::new(curve, profile).unwrap();
        for u in Interval::new(0.0, 3.0).interior(6) {
            for v in Interval::new(0.0, 2.0).interior(6) {
                let jet = m.profile().jet(u);
                let kappa = m.curve().frenet(v).unwrap().kappa;
                let s = patch::second_form_in_frame(&m, u, v, m.analytic_normals(u, v).unwrap())
                    .unwrap();
                let expect = [
                    (1, 1, 1, 0.0),
                    (1, 1, 2, 0.0),
                    (1, 2, 2, jet.f * kappa),
                    (2, 1, 1, jet.kappa_alpha()),
                    (2, 1, 2, 0.0),
                    (2, 2, 2, jet.f * jet.g1),
                ];
                for (k, i, j, value) in expect {
                    assert!((s.c(k, i, j) - value).abs() < 1e-8, "c^{k}_{i}{j}");
                }
                let c = curvature_in_frame(&m, u, v, m.analytic_normals(u, v).unwrap()).unwrap();
                let closed = m.closed_curvature(u, v).unwrap();
                for k in 0..2 {
                    assert!(c.shape[k][0][1].abs() < 1e-9);
                }
                assert!((c.shape[0][1][1] - closed.a1[1][1]).abs() < 1e-8);
                assert!((c.shape[1][0][0] - closed.a2[0][0]).abs() < 1e-8);
                assert!((c.hvec[0] - closed.h1).abs() < 1e-8);
                assert!((c.hvec[1] - closed.h2).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn closed_form_identities() {
        let curve = SphericalCurve::spiral(0.2, Interval::new(0.5, 2.5)).unwrap();
        let profile = profile_from_expr("0.5*sin(u)+2", Interval::new(0.0, 3.0), 1.0).unwrap();
        let m = MeridianSurface::new(curve, profile).unwrap();
        for u in Interval::new(0.0, 3.0).interior(9) {
            for v in Interval::new(0.5, 2.5).interior(7) {
                let c = m.closed_curvature(u, v).unwrap();
                let jet = m.profile().jet(u);
                assert!((c.k + jet.f2 / jet.f).abs() < 1e-8);
                assert!((c.h * c.h - (c.h1 * c.h1 + c.h2 * c.h2)).abs() < 1e-12);
                let dets = c.a1[0][0] * c.a1[1][1] + c.a2[0][0] * c.a2[1][1];
                assert!((c.k - dets).abs() < 1e-10);
                let kv = diff::five_point(|x| m.gauss_curvature(u, x), v, 1e-4);
                assert!(kv.abs() <= 1e-10);
                // K_u = cos u / f² for this profile.
                let p = m.weingarten_partials(u, v).unwrap();
                assert!((p.k_u - u.cos() / (jet.f * jet.f)).abs() < 1e-12);
                let ku_fd = diff::five_point(|x| m.gauss_curvature(x, v), u, 1e-3);
                assert!((p.k_u - ku_fd).abs() < 1e-6);
                let hv_fd = diff::five_point(|x| m.mean_curvature(u, x).unwrap(), v, 1e-4);
                assert!((p.h_v - hv_fd).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_vanishing_g_prime_and_radius() {
        let flat =
            crate::profile::Profile::line(0.0, 1.0, 0.0, Interval::new(0.0, 1.0), 1.0).unwrap();
        let err = MeridianSurface::new(SphericalCurve::great_circle(Interval::new(0.0, 1.0)), flat)
            .unwrap_err();
        assert!(matches!(err, Error::GPrimeZero { .. }));
        let negative =
            crate::profile::Profile::line(0.3, -2.0, 0.0, Interval::new(0.0, 1.0), 1.0).unwrap();
        let err = MeridianSurface::new(
            SphericalCurve::great_circle(Interval::new(0.0, 1.0)),
            negative,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonRegular { .. }));
    }

    #[test]
    fn catenoid_points_are_minimal() {
        // Unit-speed catenoid profile f = √(1 + u²) over a great circle.
        let profile = profile_from_expr("(1 + u^2)^0.5", Interval::new(-1.0, 1.0), 1.0).unwrap();
        let m = MeridianSurface::new(
            SphericalCurve::great_circle(Interval::new(0.0, 6.0)),
            profile,
        )
        .unwrap();
        let c = m.closed_curvature(0.3, 1.0).unwrap();
        assert!(c.h < 1e-12);
        assert!(matches!(
            m.weingarten_partials(0.3, 1.0),
            Err(Error::MinimalPoint { .. })
        ));
    }
}
