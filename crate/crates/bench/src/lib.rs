//! Fixture surfaces shared by the benchmarks.

use meridian_core::profile::{self, FamilyParams};
use meridian_core::weingarten::GridSpec;
use meridian_core::{Interval, MeridianSurface, Profile, SphericalCurve};

/// Spiral directrix with the cosh profile A = 0.5, b = 2, c = 0.
pub fn cosh_over_spiral() -> MeridianSurface {
    let curve = SphericalCurve::spiral(0.2, Interval::new(0.5, 2.5)).expect("spiral");
    let profile = profile::cosh_profile(
        &FamilyParams::cosh(0.5, 2.0, 0.0),
        Interval::new(-1.0, 1.0),
        1.0,
    )
    .expect("cosh profile");
    MeridianSurface::new(curve, profile).expect("surface")
}

/// Spiral directrix with f = 0.5 sin u + 2.
pub fn counterexample() -> MeridianSurface {
    let curve = SphericalCurve::spiral(0.2, Interval::new(0.5, 2.5)).expect("spiral");
    let profile =
        profile::profile_from_expr("0.5*sin(u)+2", Interval::new(0.0, 3.0), 1.0).expect("profile");
    MeridianSurface::new(curve, profile).expect("surface")
}

/// Line profile over a small circle.
pub fn line_over_small_circle() -> MeridianSurface {
    let curve = SphericalCurve::small_circle(std::f64::consts::FRAC_PI_4, Interval::new(0.0, 1.0))
        .expect("circle");
    let profile = Profile::line(
        std::f64::consts::FRAC_PI_4,
        0.0,
        0.0,
        Interval::new(0.5, 3.0),
        1.0,
    )
    .expect("line");
    MeridianSurface::new(curve, profile).expect("surface")
}

pub fn grid(m: &MeridianSurface, n: usize) -> GridSpec {
    GridSpec::interior(m.rect(), n, n)
}
