//! Audit of the printed closed forms for g in the circle and cosh families.
//!
//! Neither printed expression is used to build surfaces. They are evaluated
//! here only to measure how far they are from the unit-speed constraint.

use serde::Serialize;

use crate::diff;
use crate::error::Result;
use crate::profile::{self, FamilyParams};
use crate::Interval;

/// Printed circle-family g: 2(sin φ − 1)√(1 + sin φ)/cos φ, φ = a u + a c₁.
pub fn printed_circle_g(a: f64, c1: f64, u: f64) -> f64 {
    let phi = a * u + a * c1;
    2.0 * (phi.sin() - 1.0) * (1.0 + phi.sin()).sqrt() / phi.cos()
}

/// Printed cosh-family f, in terms of the printed constant `a` (< 0).
pub fn printed_cosh_f(a: f64, b: f64, c: f64, u: f64) -> f64 {
    let e = (2.0 * (u + c) / b).exp();
    0.5 * (-a / e).sqrt() * (e + 1.0)
}

/// Printed cosh-family g, in terms of the printed constant `a` (< 0).
pub fn printed_cosh_g(a: f64, b: f64, c: f64, u: f64) -> f64 {
    let e = (2.0 * (u + c) / b).exp();
    let num = 4.0 * b * b * e + a * e * e - 2.0 * a * e + a;
    0.5 * (num / (b * b * e)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleAudit {
    pub a: f64,
    pub c1: f64,
    pub u: f64,
    pub printed_g: f64,
    /// Derivative of the printed g by central differences.
    pub printed_g_prime: f64,
    pub f_prime: f64,
    /// f'² + g_printed'² − 1; zero if the printed g were admissible.
    pub constraint_residual: f64,
}

/// Measures the constraint residual of the printed circle-family g.
pub fn audit_circle(a: f64, c1: f64, u: f64) -> CircleAudit {
    let h = 1e-4 * u.abs().max(1.0);
    let dg = diff::five_point(|x| printed_circle_g(a, c1, x), u, h);
    let f_prime = -(a * u + a * c1).sin();
    CircleAudit {
        a,
        c1,
        u,
        printed_g: printed_circle_g(a, c1, u),
        printed_g_prime: dg,
        f_prime,
        constraint_residual: f_prime * f_prime + dg * dg - 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoshAudit {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub b: f64,
    pub c: f64,
    /// The printed constant, −A².
    pub a_printed: f64,
    pub u: f64,
    pub printed_g: f64,
    /// √(1 − f'²) at `u`.
    pub g_prime: f64,
    /// The constraint-derived g at `u`.
    pub integrated_g: f64,
    /// |printed g − g'| at `u`.
    pub gap_to_slope: f64,
    /// max |printed g − integrated g| over `range`.
    pub max_gap_to_value: f64,
    pub range: Interval,
    /// max |printed f − A cosh((u + c)/b)| over `range`.
    pub max_f_gap: f64,
}

/// Compares the printed cosh-family g with g' and with the integrated g.
///
/// The integrated g is normalized by g(−c) = 0, the symmetric choice.
pub fn audit_cosh(params: &FamilyParams, u: f64, range: Interval) -> Result<CoshAudit> {
    let FamilyParams {
        amplitude, b, c, ..
    } = *params;
    let a = -amplitude * amplitude;
    let lo = range.lo.min(u).min(-c);
    let hi = range.hi.max(u).max(-c);
    let p = profile::cosh_profile(params, Interval::new(lo, hi), 1.0)?;
    let shift = p.g(-c);
    let g = |x: f64| p.g(x) - shift;
    let mut max_gap = 0.0_f64;
    let mut max_f_gap = 0.0_f64;
    for x in range.linspace(401) {
        max_gap = max_gap.max((printed_cosh_g(a, b, c, x) - g(x)).abs());
        max_f_gap = max_f_gap.max((printed_cosh_f(a, b, c, x) - p.f(x)).abs());
    }
    let jet = p.jet(u);
    let printed = printed_cosh_g(a, b, c, u);
    Ok(CoshAudit {
        amplitude,
        b,
        c,
        a_printed: a,
        u,
        printed_g: printed,
        g_prime: jet.g1,
        integrated_g: g(u),
        gap_to_slope: (printed - jet.g1).abs(),
        max_gap_to_value: max_gap,
        range,
        max_f_gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditReport {
    pub circle: CircleAudit,
    pub cosh: CoshAudit,
}

/// The audit at the standard probe points: a = 1, c₁ = 0, u = 0.3 for the
/// circle family and u = 0.4 on [−1, 1] for the cosh family.
pub fn standard_audit(cosh: &FamilyParams) -> Result<AuditReport> {
    Ok(AuditReport {
        circle: audit_circle(1.0, 0.0, 0.3),
        cosh: audit_cosh(cosh, 0.4, Interval::new(-1.0, 1.0))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_circle_g_simplifies() {
        // 2(s − 1)√(1 + s)/cos φ = −2√(1 − s) on the branch cos φ > 0.
        for u in [-1.0, -0.2, 0.3, 1.1] {
            let s = f64::sin(u);
            assert!((printed_circle_g(1.0, 0.0, u) + 2.0 * (1.0 - s).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_residual_matches_closed_form() {
        // With g = −2√(1 − sin u): g' = cos u/√(1 − sin u), so
        // f'² + g'² − 1 = sin²u + (1 + sin u) − 1.
        let r = audit_circle(1.0, 0.0, 0.3);
        let s = f64::sin(0.3);
        assert!((r.constraint_residual - (s * s + s)).abs() < 1e-9);
    }

    #[test]
    fn printed_cosh_f_is_the_cosh_family() {
        let a = -0.25;
        for u in [-1.0, 0.0, 0.7] {
            let want = 0.5 * f64::cosh(u / 2.0);
            assert!((printed_cosh_f(a, 2.0, 0.0, u) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn cosh_audit_separates_slope_from_value() {
        let r = audit_cosh(
            &FamilyParams::cosh(0.5, 2.0, 0.0),
            0.4,
            Interval::new(-1.0, 1.0),
        )
        .unwrap();
        assert!(r.gap_to_slope < 1e-10);
        assert!(r.max_gap_to_value > 0.1);
        assert!(r.max_f_gap < 1e-12);
    }
}
