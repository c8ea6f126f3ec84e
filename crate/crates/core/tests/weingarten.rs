use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use meridian_core::profile::{self, FamilyParams};
use meridian_core::scene::{parse_curve, parse_profile, parse_range};
use meridian_core::weingarten::{self, CaseTag, GridSpec, Tolerances};
use meridian_core::{Interval, MeridianSurface, SphericalCurve};

fn scene(curve: &str, prof: &str, u: &str, v: &str) -> MeridianSurface {
    let c = parse_curve(curve, parse_range(v).unwrap()).unwrap();
    let p = parse_profile(prof, parse_range(u).unwrap(), 1.0).unwrap();
    MeridianSurface::new(c, p).unwrap()
}

fn counterexample() -> MeridianSurface {
    scene("spiral:0.2", "fromf:0.5*sin(u)+2", "0:3", "0.5:2.5")
}

#[test]
fn great_and_small_circles_have_zero_residual() {
    for curve in ["great", "small:0.6"] {
        for prof in ["fromf:0.5*sin(u)+2", "cosh:0.5,2,0", "line:0.4,1"] {
            let m = scene(curve, prof, "0.5:2.5", "0:2");
            let r = weingarten::residual(&m, &GridSpec::interior(m.rect(), 15, 15)).unwrap();
            assert!(r.max_abs < 1e-14, "{curve} {prof}: {}", r.max_abs);
            assert!(
                r.max_abs_jacobian < 1e-9,
                "{curve} {prof}: {}",
                r.max_abs_jacobian
            );
        }
    }
}

#[test]
fn paths_agree_on_non_weingarten_surfaces() {
    for (curve, prof, u) in [
        ("spiral:0.2", "fromf:0.5*sin(u)+2", "0:3"),
        ("spiral:-0.1", "fromf:1+0.3*u^2", "0:1"),
        ("spiral:0.15", "fromf:exp(u^2/4)", "0:1.2"),
    ] {
        let m = scene(curve, prof, u, "0.3:1.8");
        let r = weingarten::residual(&m, &GridSpec::default_for(m.rect())).unwrap();
        assert!(r.max_abs > 1e-4, "{prof}: {}", r.max_abs);
        assert!(r.max_path_gap < 1e-5, "{prof}: {}", r.max_path_gap);
    }
}

#[test]
fn flipping_the_normal_keeps_verdict_and_magnitude() {
    let tol = Tolerances::default();
    for m in [
        counterexample(),
        scene("spiral:0.2", "cosh:0.5,2,0", "-1:1", "0.5:2.5"),
        scene("small:0.7853981634", "circle:1,-1.5708,0", "0.3:2.8", "0:2"),
    ] {
        let flipped = m.with_flipped_normal();
        let g = GridSpec::interior(m.rect(), 21, 21);
        let a = weingarten::residual(&m, &g).unwrap();
        let b = weingarten::residual(&flipped, &g).unwrap();
        for (x, y) in a.analytic.iter().zip(&b.analytic) {
            let (x, y) = (x.unwrap(), y.unwrap());
            assert!((x.abs() - y.abs()).abs() <= 1e-12 * (1.0 + x.abs()));
        }
        let k = m.curve().kappa(1.0).unwrap();
        assert_eq!(flipped.curve().kappa(1.0).unwrap(), -k);
        assert_eq!(
            weingarten::classify(&m, &g, &tol).case,
            weingarten::classify(&flipped, &g, &tol).case
        );
    }
}

#[test]
fn doubling_the_grid_barely_moves_the_maximum() {
    let m = counterexample();
    let coarse = weingarten::residual(&m, &GridSpec::interior(m.rect(), 41, 41)).unwrap();
    let fine = weingarten::residual(&m, &GridSpec::interior(m.rect(), 82, 82)).unwrap();
    let change = (fine.max_abs - coarse.max_abs).abs() / coarse.max_abs;
    assert!(change < 0.1, "relative change {change}");
}

#[test]
fn residual_matches_partials_product() {
    let m = counterexample();
    let g = GridSpec::interior(m.rect(), 7, 5);
    let r = weingarten::residual(&m, &g).unwrap();
    for (i, u) in g.us().into_iter().enumerate() {
        for (j, v) in g.vs().into_iter().enumerate() {
            let p = m.weingarten_partials(u, v).unwrap();
            assert_eq!(p.k_v, 0.0);
            assert!((r.get(i, j).unwrap() - p.jacobian()).abs() < 1e-15);
        }
    }
    let (u, v) = r.argmax;
    assert!(g.u.contains(u) && g.v.contains(v));
}

#[test]
fn minimal_points_are_marked_not_fatal() {
    // f = √(1 + u²) over a great circle is a catenoid-like minimal surface.
    let m = scene("great", "fromf:(1+u^2)^0.5", "-0.8:0.8", "0:3");
    let g = GridSpec::interior(m.rect(), 9, 9);
    let r = weingarten::residual(&m, &g).unwrap();
    assert_eq!(r.minimal_points, 81);
    assert!(r.analytic.iter().all(Option::is_none));
    let rows = weingarten::curvature_field(&m, &g).unwrap();
    assert!(rows
        .iter()
        .all(|row| row.residual.is_nan() && row.h.abs() < 1e-8));
}

#[test]
fn verify_family_passes_for_every_positive_case() {
    let params = [
        FamilyParams::default(),
        FamilyParams {
            beta: 0.3,
            ..FamilyParams::circle(2.0, -FRAC_PI_4, 0.3)
        },
        FamilyParams {
            beta: 1.2,
            ..FamilyParams::cosh(1.0, 3.0, 0.5)
        },
    ];
    for tag in CaseTag::POSITIVE {
        for p in &params {
            let r = weingarten::verify_family(tag, p, Some((21, 21))).unwrap();
            assert!(r.pass, "{tag} {p:?}: {:?}", r.checks);
            assert_eq!(r.classification, tag);
        }
    }
}

#[test]
fn verify_family_rejects_negative_tags_and_bad_params() {
    let p = FamilyParams::default();
    assert!(weingarten::verify_family(CaseTag::NotWeingarten, &p, None).is_err());
    assert!(weingarten::verify_family(
        CaseTag::CircleFamilyIIb,
        &FamilyParams::circle(0.0, 0.0, 0.0),
        None
    )
    .is_err());
    assert!(weingarten::verify_family(
        CaseTag::CoshFamilyIIIb,
        &FamilyParams::cosh(-1.0, 2.0, 0.0),
        None
    )
    .is_err());
}

#[test]
fn evidence_near_a_tolerance_is_indeterminate() {
    // A spiral with zero slope at colatitude π/4 is a small circle, κ = 1.
    let curve = SphericalCurve::spiral(0.0, Interval::new(0.5, 2.5)).unwrap();
    let p = profile::circle_arc_profile(
        &FamilyParams::circle(1.0, -FRAC_PI_2, 0.0),
        Interval::new(0.3, 2.8),
        1.0,
    )
    .unwrap();
    let m = MeridianSurface::new(curve, p).unwrap();
    let g = GridSpec::default_for(m.rect());
    assert_eq!(
        weingarten::classify(&m, &g, &Tolerances::default()).case,
        CaseTag::CircleFamilyIIb
    );
    let tight = Tolerances {
        tol_kappa: 0.5,
        ..Tolerances::default()
    };
    assert_eq!(
        weingarten::classify(&m, &g, &tight).case,
        CaseTag::Indeterminate
    );
}

#[test]
fn verdict_json_has_documented_fields() {
    let m = scene("small:0.7853981634", "line:0.7853981634", "0.5:3", "0:1");
    let v = weingarten::classify(&m, &GridSpec::default_for(m.rect()), &Tolerances::default());
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["case"], "RuledE3_IIa");
    for key in ["evidence", "tolerances", "grid", "max_residual"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["grid"]["nu"], 41);
    assert_eq!(json["tolerances"]["tol_ode"], 1e-7);
}

#[test]
fn classification_does_not_depend_on_grid_size_for_families() {
    let tol = Tolerances::default();
    let m = scene("spiral:0.2", "cosh:0.5,2,0", "-1:1", "0.5:2.5");
    for n in [8, 17, 41] {
        let g = GridSpec::interior(m.rect(), n, n);
        assert_eq!(
            weingarten::classify(&m, &g, &tol).case,
            CaseTag::CoshFamilyIIIb
        );
    }
    let m = scene("small:0.7853981634", "circle:1,-1.5708,0", "0.3:2.8", "0:2");
    let k = m.gauss_curvature(1.0, 0.0);
    assert!((k - 1.0).abs() < 1e-12);
}
