//! Parsing of the compact scene strings used on the command line.
//!
//! Curves: `great`, `small:<θ₀>`, `spiral:<slope>`.
//! Profiles: `line:<β>[,<f₀>[,<g₀>]]`, `circle:<a>,<c₁>,<c₂>`,
//! `cosh:<A>,<b>,<c>`, `fromf:<expression in u>`.
//! Ranges: `<lo>:<hi>`. Angles are radians.

use crate::error::{Error, Result};
use crate::profile::{self, FamilyParams, Profile};
use crate::spherical_curve::SphericalCurve;
use crate::Interval;

fn number(s: &str) -> Result<f64> {
    let t = s.trim();
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("expected a number, got {t:?}")))
}

fn numbers(s: &str, min: usize, max: usize, what: &str) -> Result<Vec<f64>> {
    let xs = s.split(',').map(number).collect::<Result<Vec<_>>>()?;
    if xs.len() < min || xs.len() > max {
        let count = if min == max {
            format!("{min}")
        } else {
            format!("{min} to {max}")
        };
        return Err(Error::Parse(format!(
            "{what} takes {count} comma-separated numbers, got {:?}",
            s
        )));
    }
    Ok(xs)
}

/// Parses `lo:hi` with lo < hi.
pub fn parse_range(s: &str) -> Result<Interval> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("range must look like lo:hi, got {s:?}")))?;
    let (lo, hi) = (number(lo)?, number(hi)?);
    if !(hi > lo) {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok(Interval::new(lo, hi))
}

pub fn parse_curve(spec: &str, domain: Interval) -> Result<SphericalCurve> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    match (head.trim(), rest) {
        ("great", None) => Ok(SphericalCurve::great_circle(domain)),
        ("small", Some(r)) => SphericalCurve::small_circle(number(r)?, domain),
        ("spiral", Some(r)) => SphericalCurve::spiral(number(r)?, domain),
        _ => Err(Error::Parse(format!(
            "unknown curve {spec:?}; expected great, small:<theta0> or spiral:<slope>"
        ))),
    }
}

/// Builds a profile on `domain`; `sign` multiplies g'.
pub fn parse_profile(spec: &str, domain: Interval, sign: f64) -> Result<Profile> {
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("profile {spec:?} needs a kind prefix")))?;
    match head.trim() {
        "line" => {
            let xs = numbers(rest, 1, 3, "line")?;
            let f0 = xs.get(1).copied().unwrap_or(0.0);
            let g0 = xs.get(2).copied().unwrap_or(0.0);
            Profile::line(xs[0], f0, g0, domain, sign)
        }
        "circle" => {
            let xs = numbers(rest, 3, 3, "circle")?;
            profile::circle_arc_profile(&FamilyParams::circle(xs[0], xs[1], xs[2]), domain, sign)
        }
        "cosh" => {
            let xs = numbers(rest, 3, 3, "cosh")?;
            profile::cosh_profile(&FamilyParams::cosh(xs[0], xs[1], xs[2]), domain, sign)
        }
        "fromf" => profile::profile_from_expr(rest, domain, sign),
        _ => Err(Error::Parse(format!(
            "unknown profile kind {head:?}; expected line, circle, cosh or fromf"
        ))),
    }
}
