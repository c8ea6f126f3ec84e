//! Unit-speed meridian profiles α(u) = (f(u), g(u)) with f'² + g'² = 1.
//!
//! `g` is always rebuilt from the unit-speed constraint: analytically for
//! lines and circle arcs, by quadrature of `sign·√(1 − f'²)` otherwise.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diff;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::quad;
use crate::Interval;

/// Smallest admissible |f|.
pub const MIN_RADIUS: f64 = 1e-6;
/// Lower bound of cos(a u + a c₁) on a circle-arc branch.
pub const BRANCH_MARGIN: f64 = 1e-3;
/// `cosh` profiles require |f'| ≤ 1 − this.
pub const COSH_SLOPE_MARGIN: f64 = 1e-3;
/// Generic profiles require |f'| ≤ 1 − this.
pub const GENERIC_SLOPE_MARGIN: f64 = 1e-6;
/// Number of intervals in the cumulative g table.
pub const G_TABLE_INTERVALS: usize = 2048;
/// Absolute tolerance of the g quadrature over the whole domain.
pub const G_QUAD_TOL: f64 = 1e-10;

/// A real function of one variable with up to three derivatives.
pub trait ScalarFn: Send + Sync {
    fn value(&self, u: f64) -> f64;

    /// Derivative of order 1..=3; defaults to fourth-order central
    /// differences.
    fn derivative(&self, u: f64, order: usize) -> f64 {
        diff::derivative(|x| self.value(x), u, order)
    }
}

/// Scalar function backed by a closure; derivatives by finite differences.
pub struct FnScalar<F>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> ScalarFn for FnScalar<F> {
    fn value(&self, u: f64) -> f64 {
        (self.0)(u)
    }
}

/// An expression together with its first three symbolic derivatives.
#[derive(Debug, Clone)]
pub struct DiffExpr {
    source: String,
    jets: [Expr; 4],
}

impl DiffExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let e = Expr::parse(src)?;
        let d1 = e.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        Ok(Self {
            source: src.to_string(),
            jets: [e, d1, d2, d3],
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl ScalarFn for DiffExpr {
    fn value(&self, u: f64) -> f64 {
        self.jets[0].eval(u)
    }

    fn derivative(&self, u: f64, order: usize) -> f64 {
        match order {
            0..=3 => self.jets[order].eval(u),
            _ => panic!("derivative order {order} not supported"),
        }
    }
}

/// f(u) = A cosh((u + c)/b).
#[derive(Debug, Clone, Copy)]
struct CoshFn {
    amplitude: f64,
    b: f64,
    c: f64,
}

impl ScalarFn for CoshFn {
    fn value(&self, u: f64) -> f64 {
        self.amplitude * ((u + self.c) / self.b).cosh()
    }

    fn derivative(&self, u: f64, order: usize) -> f64 {
        let x = (u + self.c) / self.b;
        let scale = self.amplitude / self.b.powi(order as i32);
        if order.is_multiple_of(2) {
            scale * x.cosh()
        } else {
            scale * x.sinh()
        }
    }
}

/// Integration constants of the explicit solution families.
///
/// Circle arcs: f = cos(a u + a c₁)/a + c₂. Cosh family:
/// f = A cosh((u + c)/b), i.e. A = √(−a') for the family's own constant
/// a' < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    /// Inclination of line profiles.
    pub beta: f64,
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            beta: std::f64::consts::FRAC_PI_4,
            a: 1.0,
            c1: -FRAC_PI_2,
            c2: 0.0,
            amplitude: 0.5,
            b: 2.0,
            c: 0.0,
        }
    }
}

impl FamilyParams {
    pub fn circle(a: f64, c1: f64, c2: f64) -> Self {
        Self {
            a,
            c1,
            c2,
            ..Self::default()
        }
    }

    pub fn line(beta: f64) -> Self {
        Self {
            beta,
            ..Self::default()
        }
    }

    pub fn cosh(amplitude: f64, b: f64, c: f64) -> Self {
        Self {
            amplitude,
            b,
            c,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum ProfileKind {
    Line {
        beta: f64,
    },
    CircleArc {
        a: f64,
        c1: f64,
        c2: f64,
    },
    CoshFamily {
        #[serde(rename = "A")]
        amplitude: f64,
        b: f64,
        c: f64,
    },
    GenericFromF,
}

/// Values of f, g and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileJet {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
}

impl ProfileJet {
    /// κ_α = f'g'' − g'f''.
    pub fn kappa_alpha(&self) -> f64 {
        self.f1 * self.g2 - self.g1 * self.f2
    }

    /// f f''' − f' f''.
    pub fn ode_residual(&self) -> f64 {
        self.f * self.f3 - self.f1 * self.f2
    }

    pub fn constraint_residual(&self) -> f64 {
        self.f1 * self.f1 + self.g1 * self.g1 - 1.0
    }
}

#[derive(Clone)]
enum Repr {
    Line {
        cos: f64,
        sin: f64,
        f0: f64,
        g0: f64,
    },
    Circle {
        a: f64,
        c1: f64,
        c2: f64,
    },
    Numeric {
        f: Arc<dyn ScalarFn>,
        /// g at the uniform nodes u₀ + iΔ.
        table: Arc<Vec<f64>>,
        step: f64,
    },
}

/// A unit-speed meridian profile on the interval I.
#[derive(Clone)]
pub struct Profile {
    kind: ProfileKind,
    domain: Interval,
    /// Sign of g'.
    sign: f64,
    repr: Repr,
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Profile")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .field("sign", &self.sign)
            .finish()
    }
}

fn check_sign(sign: f64) -> Result<f64> {
    if sign == 1.0 || sign == -1.0 {
        Ok(sign)
    } else {
        Err(Error::InvalidParameter(format!(
            "sign must be ±1, got {sign}"
        )))
    }
}

impl Profile {
    /// f = u cos β + f₀, g = sign·u sin β + g₀.
    pub fn line(beta: f64, f0: f64, g0: f64, domain: Interval, sign: f64) -> Result<Self> {
        let sign = check_sign(sign)?;
        let (sin, cos) = beta.sin_cos();
        let f_lo = domain.lo * cos + f0;
        let f_hi = domain.hi * cos + f0;
        if f_lo.signum() != f_hi.signum() || f_lo.abs().min(f_hi.abs()) < MIN_RADIUS {
            let u = if f_lo.abs() < f_hi.abs() {
                domain.lo
            } else {
                domain.hi
            };
            return Err(Error::NonRegular {
                u,
                reason: "line profile reaches the axis f = 0".into(),
            });
        }
        Ok(Self {
            kind: ProfileKind::Line { beta },
            domain,
            sign,
            repr: Repr::Line { cos, sin, f0, g0 },
        })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    pub fn jet(&self, u: f64) -> ProfileJet {
        match &self.repr {
            Repr::Line { cos, sin, f0, g0 } => ProfileJet {
                f: u * cos + f0,
                f1: *cos,
                f2: 0.0,
                f3: 0.0,
                g: self.sign * u * sin + g0,
                g1: self.sign * sin,
                g2: 0.0,
            },
            Repr::Circle { a, c1, c2 } => {
                let (s, c) = (a * u + a * c1).sin_cos();
                ProfileJet {
                    f: c / a + c2,
                    f1: -s,
                    f2: -a * c,
                    f3: a * a * s,
                    g: self.sign * s / a,
                    g1: self.sign * c,
                    g2: -self.sign * a * s,
                }
            }
            Repr::Numeric { f, .. } => {
                let f1 = f.derivative(u, 1);
                let f2 = f.derivative(u, 2);
                let root = (1.0 - f1 * f1).sqrt();
                ProfileJet {
                    f: f.value(u),
                    f1,
                    f2,
                    f3: f.derivative(u, 3),
                    g: self.g(u),
                    g1: self.sign * root,
                    g2: -self.sign * f1 * f2 / root,
                }
            }
        }
    }

    pub fn f(&self, u: f64) -> f64 {
        match &self.repr {
            Repr::Numeric { f, .. } => f.value(u),
            _ => self.jet(u).f,
        }
    }

    pub fn g(&self, u: f64) -> f64 {
        match &self.repr {
            Repr::Numeric { f, table, step } => {
                let last = table.len() - 2;
                let pos = (u - self.domain.lo) / step;
                let i = if pos <= 0.0 {
                    0
                } else {
                    (pos.floor() as usize).min(last)
                };
                let ui = self.domain.lo + i as f64 * step;
                let slope = |x: f64| {
                    let d = f.derivative(x, 1);
                    (1.0 - d * d).sqrt()
                };
                table[i] + self.sign * quad::kronrod15(slope, ui, u)
            }
            _ => self.jet(u).g,
        }
    }

    pub fn kappa_alpha(&self, u: f64) -> f64 {
        kappa_alpha(self, u)
    }
}

/// Curvature f'g'' − g'f'' of the meridian curve at `u`.
pub fn kappa_alpha(p: &Profile, u: f64) -> f64 {
    p.jet(u).kappa_alpha()
}

/// Circle arc f = cos(a u + a c₁)/a + c₂, g = sign·sin(a u + a c₁)/a.
///
/// The domain must stay on one branch where cos(a u + a c₁) ≥ 1e-3, so that
/// g' = sign·cos(a u + a c₁) keeps its sign.
pub fn circle_arc_profile(params: &FamilyParams, domain: Interval, sign: f64) -> Result<Profile> {
    let sign = check_sign(sign)?;
    let FamilyParams { a, c1, c2, .. } = *params;
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "circle family needs a ≠ 0, got {a}"
        )));
    }
    let phase = |u: f64| a * (u + c1);
    let (p_lo, p_hi) = {
        let (x, y) = (phase(domain.lo), phase(domain.hi));
        (x.min(y), x.max(y))
    };
    let half = BRANCH_MARGIN.acos();
    let k = (0.5 * (p_lo + p_hi) / std::f64::consts::TAU).round();
    let centre = k * std::f64::consts::TAU;
    if p_lo < centre - half || p_hi > centre + half {
        let bad = if p_lo < centre - half { p_lo } else { p_hi };
        return Err(Error::BranchViolation { u: bad / a - c1 });
    }
    let profile = Profile {
        kind: ProfileKind::CircleArc { a, c1, c2 },
        domain,
        sign,
        repr: Repr::Circle { a, c1, c2 },
    };
    check_radius(&profile, |u| profile.f(u))?;
    Ok(profile)
}

/// Cosh family f = A cosh((u + c)/b) solving f f''' − f' f'' = 0; g by
/// quadrature of sign·√(1 − f'²).
pub fn cosh_profile(params: &FamilyParams, domain: Interval, sign: f64) -> Result<Profile> {
    let FamilyParams {
        amplitude, b, c, ..
    } = *params;
    if !(amplitude > 0.0) || b == 0.0 || !b.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cosh family needs A > 0 and b ≠ 0, got A = {amplitude}, b = {b}"
        )));
    }
    let f = CoshFn { amplitude, b, c };
    // |f'| is largest at the endpoint farthest from u = −c.
    let far = if (domain.lo + c).abs() > (domain.hi + c).abs() {
        domain.lo
    } else {
        domain.hi
    };
    let slope = f.derivative(far, 1).abs();
    if slope > 1.0 - COSH_SLOPE_MARGIN {
        return Err(Error::SpeedViolation { u: far, slope });
    }
    let mut p = numeric_profile(Arc::new(f), domain, sign, 0.0, COSH_SLOPE_MARGIN)?;
    p.kind = ProfileKind::CoshFamily { amplitude, b, c };
    Ok(p)
}

/// Profile from an arbitrary f with g(u₀) = `g0`.
pub fn profile_from_f(
    f: Arc<dyn ScalarFn>,
    domain: Interval,
    sign: f64,
    g0: f64,
) -> Result<Profile> {
    numeric_profile(f, domain, sign, g0, GENERIC_SLOPE_MARGIN)
}

/// Profile from an expression in `u`, differentiated symbolically.
pub fn profile_from_expr(src: &str, domain: Interval, sign: f64) -> Result<Profile> {
    profile_from_f(Arc::new(DiffExpr::parse(src)?), domain, sign, 0.0)
}

fn check_radius(p: &Profile, f: impl Fn(f64) -> f64) -> Result<()> {
    for u in p.domain.linspace(G_TABLE_INTERVALS + 1) {
        let value = f(u);
        if !(value.abs() >= MIN_RADIUS) {
            return Err(Error::NonRegular {
                u,
                reason: format!("|f| = {value:e} below {MIN_RADIUS:e}"),
            });
        }
    }
    Ok(())
}

fn numeric_profile(
    f: Arc<dyn ScalarFn>,
    domain: Interval,
    sign: f64,
    g0: f64,
    slope_margin: f64,
) -> Result<Profile> {
    let sign = check_sign(sign)?;
    if !(domain.hi > domain.lo) {
        return Err(Error::InvalidParameter(format!("empty domain {domain:?}")));
    }
    let nodes = domain.linspace(G_TABLE_INTERVALS + 1);
    for &u in &nodes {
        let value = f.value(u);
        if !(value >= MIN_RADIUS) {
            return Err(Error::NonRegular {
                u,
                reason: format!("f = {value:e} below {MIN_RADIUS:e}"),
            });
        }
        let slope = f.derivative(u, 1).abs();
        if !(slope <= 1.0 - slope_margin) {
            return Err(Error::SpeedViolation { u, slope });
        }
    }
    let step = domain.width() / G_TABLE_INTERVALS as f64;
    let tol = G_QUAD_TOL / G_TABLE_INTERVALS as f64;
    let mut table = Vec::with_capacity(nodes.len());
    let mut acc = g0;
    table.push(acc);
    for i in 0..G_TABLE_INTERVALS {
        let lo = domain.lo + i as f64 * step;
        let piece = quad::integrate(
            |x| {
                let d = f.derivative(x, 1);
                (1.0 - d * d).sqrt()
            },
            lo,
            lo + step,
            tol,
        )?;
        acc += sign * piece;
        table.push(acc);
    }
    Ok(Profile {
        kind: ProfileKind::GenericFromF,
        domain,
        sign,
        repr: Repr::Numeric {
            f,
            table: Arc::new(table),
            step,
        },
    })
}
