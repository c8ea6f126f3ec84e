//! Unit-speed curves on the unit sphere S²(1) and their spherical Frenet
//! frame {t, n, r}:
//!
//! ```text
//! r' = t,   t' = κ n − r,   n' = −κ t,
//! ```
//!
//! with the normal oriented as `n = r × t`.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use serde::Serialize;

use crate::diff::{self, Stencil};
use crate::error::{Error, Result};
use crate::euclid::Vec3;
use crate::quad;
use crate::Interval;

/// Allowed deviation of |r| from 1.
pub const ON_SPHERE_TOL: f64 = 1e-9;
/// Allowed deviation of |r'| from 1.
pub const UNIT_SPEED_TOL: f64 = 1e-7;
/// Speeds below this are treated as a stalled parametrization.
pub const ZERO_SPEED_TOL: f64 = 1e-10;
/// Minimum number of arc-length table intervals.
pub const MIN_TABLE_STEPS: usize = 1024;

fn vec3_derivative<F: Fn(f64) -> Vec3>(f: F, w: f64, order: usize) -> Vec3 {
    let s = Stencil::central(order, w);
    s.points
        .iter()
        .zip(&s.weights)
        .map(|(p, wt)| f(*p) * *wt)
        .sum()
}

/// A regular curve on S² in an arbitrary parametrization `w`.
///
/// Derivatives default to fourth-order finite differences; implementors with
/// closed forms should override them.
pub trait RawCurve: Send + Sync {
    fn position(&self, w: f64) -> Vec3;

    fn velocity(&self, w: f64) -> Vec3 {
        vec3_derivative(|x| self.position(x), w, 1)
    }

    fn acceleration(&self, w: f64) -> Vec3 {
        vec3_derivative(|x| self.position(x), w, 2)
    }

    fn speed(&self, w: f64) -> f64 {
        self.velocity(w).norm()
    }
}

/// A raw curve given by a position closure only.
pub struct FnCurve<F>(pub F);

impl<F: Fn(f64) -> Vec3 + Send + Sync> RawCurve for FnCurve<F> {
    fn position(&self, w: f64) -> Vec3 {
        (self.0)(w)
    }
}

/// Curve whose colatitude drifts linearly with longitude:
/// θ(w) = θ_b + slope·w, longitude w.
#[derive(Debug, Clone, Copy)]
pub struct SphericalSpiral {
    pub slope: f64,
    pub base_colatitude: f64,
}

impl SphericalSpiral {
    fn colatitude(&self, w: f64) -> f64 {
        self.base_colatitude + self.slope * w
    }
}

impl RawCurve for SphericalSpiral {
    fn position(&self, w: f64) -> Vec3 {
        let (st, ct) = self.colatitude(w).sin_cos();
        let (sw, cw) = w.sin_cos();
        Vec3::new(st * cw, st * sw, ct)
    }

    fn velocity(&self, w: f64) -> Vec3 {
        let k = self.slope;
        let (st, ct) = self.colatitude(w).sin_cos();
        let (sw, cw) = w.sin_cos();
        Vec3::new(k * ct * cw - st * sw, k * ct * sw + st * cw, -k * st)
    }

    fn acceleration(&self, w: f64) -> Vec3 {
        let k = self.slope;
        let (st, ct) = self.colatitude(w).sin_cos();
        let (sw, cw) = w.sin_cos();
        Vec3::new(
            -k * k * st * cw - 2.0 * k * ct * sw - st * cw,
            -k * k * st * sw + 2.0 * k * ct * cw - st * sw,
            -k * k * ct,
        )
    }
}

/// Arc-length reparametrization of a [`RawCurve`].
///
/// The table `s(w)` is built by adaptive RK4 on `ds/dw = |raw'(w)|`. The
/// inverse `w(s)` starts from a cubic Hermite interpolant of the table (which
/// is monotone, the slopes `1/|raw'|` being positive) and is polished by
/// Newton steps on `s_i + ∫_{w_i}^{w} |raw'| = s`.
pub struct ArcLengthCurve {
    raw: Arc<dyn RawCurve>,
    /// (w_i, s_i, |raw'(w_i)|)
    nodes: Vec<(f64, f64, f64)>,
    /// v = s + offset
    offset: f64,
}

impl ArcLengthCurve {
    fn build(raw: Arc<dyn RawCurve>, w0: f64, w1: f64) -> Result<Self> {
        if !(w1 > w0) {
            return Err(Error::InvalidParameter(format!(
                "empty parameter interval [{w0}, {w1}]"
            )));
        }
        let table = quad::rk4_cumulative(|w| raw.speed(w), w0, w1, MIN_TABLE_STEPS, 1e-13);
        let mut nodes = Vec::with_capacity(table.len());
        for (w, s) in table {
            let p = raw.position(w);
            let deviation = p.norm() - 1.0;
            if !(deviation.abs() <= ON_SPHERE_TOL) {
                return Err(Error::OffSphere { v: s, deviation });
            }
            let speed = raw.speed(w);
            if !(speed >= ZERO_SPEED_TOL) {
                return Err(Error::ZeroSpeed { w, speed });
            }
            nodes.push((w, s, speed));
        }
        Ok(Self {
            raw,
            nodes,
            offset: 0.0,
        })
    }

    fn length(&self) -> f64 {
        self.nodes.last().map(|n| n.1).unwrap_or(0.0)
    }

    fn segment(&self, s: f64) -> usize {
        let last = self.nodes.len() - 2;
        match self.nodes.binary_search_by(|n| n.1.total_cmp(&s)) {
            Ok(i) => i.min(last),
            Err(0) => 0,
            Err(i) => (i - 1).min(last),
        }
    }

    /// Arc length from the table start to `w`, using node `i` as anchor.
    fn arc_from(&self, i: usize, w: f64) -> f64 {
        let (wi, si, _) = self.nodes[i];
        si + quad::kronrod15(|x| self.raw.speed(x), wi, w)
    }

    /// Arc length (table-relative) at raw parameter `w`.
    fn arc_at(&self, w: f64) -> f64 {
        let i = match self.nodes.binary_search_by(|n| n.0.total_cmp(&w)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => (i - 1).min(self.nodes.len() - 1),
        };
        self.arc_from(i, w)
    }

    /// Raw parameter at arc-length coordinate `v`.
    pub fn parameter_at(&self, v: f64) -> f64 {
        let s = v - self.offset;
        let i = self.segment(s);
        let (w0, s0, d0) = self.nodes[i];
        let (w1, s1, d1) = self.nodes[i + 1];
        let mut w = if s < s0 {
            w0 + (s - s0) / d0
        } else if s > s1 {
            w1 + (s - s1) / d1
        } else {
            let ds = s1 - s0;
            let t = (s - s0) / ds;
            let (t2, t3) = (t * t, t * t * t);
            (2.0 * t3 - 3.0 * t2 + 1.0) * w0
                + (t3 - 2.0 * t2 + t) * ds / d0
                + (-2.0 * t3 + 3.0 * t2) * w1
                + (t3 - t2) * ds / d1
        };
        for _ in 0..8 {
            let residual = self.arc_from(i, w) - s;
            let step = residual / self.raw.speed(w);
            w -= step;
            if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0) {
                break;
            }
        }
        w
    }

    fn position(&self, v: f64) -> Vec3 {
        self.raw.position(self.parameter_at(v))
    }

    fn tangent(&self, v: f64) -> Vec3 {
        let w = self.parameter_at(v);
        self.raw.velocity(w).normalized()
    }

    fn second(&self, v: f64) -> Vec3 {
        let w = self.parameter_at(v);
        let d1 = self.raw.velocity(w);
        let d2 = self.raw.acceleration(w);
        let sigma2 = d1.norm_squared();
        (d2 * sigma2 - d1 * d1.dot(d2)) / (sigma2 * sigma2)
    }
}

/// What a [`SphericalCurve`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CurveKind {
    GreatCircle,
    SmallCircle { theta0: f64 },
    Reparametrized,
}

#[derive(Clone)]
enum Repr {
    Great,
    Small { sin: f64, cos: f64 },
    Arc(Arc<ArcLengthCurve>),
}

/// An arc-length parametrized curve r(v) on S²(1) with domain J.
#[derive(Clone)]
pub struct SphericalCurve {
    kind: CurveKind,
    repr: Repr,
    domain: Interval,
    /// +1 for n = r × t, −1 for the flipped normal.
    orientation: f64,
}

impl std::fmt::Debug for SphericalCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphericalCurve")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .field("orientation", &self.orientation)
            .finish()
    }
}

/// Frenet data of a spherical curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetSample {
    pub r: Vec3,
    pub t: Vec3,
    pub n: Vec3,
    pub kappa: f64,
    pub kappa_prime: f64,
}

impl SphericalCurve {
    /// The equator r(v) = (cos v, sin v, 0).
    pub fn great_circle(domain: Interval) -> Self {
        Self {
            kind: CurveKind::GreatCircle,
            repr: Repr::Great,
            domain,
            orientation: 1.0,
        }
    }

    /// The circle of colatitude `theta0`, traversed at unit speed.
    pub fn small_circle(theta0: f64, domain: Interval) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "colatitude {theta0} outside (0, π)"
            )));
        }
        Ok(Self {
            kind: CurveKind::SmallCircle { theta0 },
            repr: Repr::Small {
                sin: theta0.sin(),
                cos: theta0.cos(),
            },
            domain,
            orientation: 1.0,
        })
    }

    /// Spherical spiral with colatitude π/4 + slope·w at longitude w,
    /// reparametrized by arc length measured from w = 0 and covering
    /// `domain`.
    pub fn spiral(slope: f64, domain: Interval) -> Result<Self> {
        if !slope.is_finite() {
            return Err(Error::InvalidParameter(format!("spiral slope {slope}")));
        }
        let raw = SphericalSpiral {
            slope,
            base_colatitude: FRAC_PI_4,
        };
        let margin = 0.05 * domain.width() + 0.05;
        let reach = |target: f64| -> Result<f64> {
            // Solve s(w) = target, s measured from w = 0.
            let mut w = target;
            for _ in 0..60 {
                let s = quad::integrate(|x| raw.speed(x), 0.0, w, 1e-12)?;
                let step = (target - s) / raw.speed(w);
                w += step;
                if step.abs() < 1e-12 {
                    break;
                }
            }
            Ok(w)
        };
        let w_lo = reach(domain.lo - margin)?.min(0.0);
        let w_hi = reach(domain.hi + margin)?.max(0.0);
        for w in [w_lo, w_hi] {
            let theta = raw.colatitude(w);
            if !(0.05..=std::f64::consts::PI - 0.05).contains(&theta) {
                return Err(Error::InvalidParameter(format!(
                    "spiral with slope {slope} reaches colatitude {theta:.3} on the requested domain"
                )));
            }
        }
        let mut curve = ArcLengthCurve::build(Arc::new(raw), w_lo, w_hi)?;
        curve.offset = -curve.arc_at(0.0);
        Ok(Self {
            kind: CurveKind::Reparametrized,
            repr: Repr::Arc(Arc::new(curve)),
            domain,
            orientation: 1.0,
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// The same curve with the opposite normal orientation (κ → −κ).
    pub fn with_flipped_normal(&self) -> Self {
        let mut c = self.clone();
        c.orientation = -c.orientation;
        c
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn position(&self, v: f64) -> Vec3 {
        match &self.repr {
            Repr::Great => Vec3::new(v.cos(), v.sin(), 0.0),
            Repr::Small { sin, cos } => {
                let (sp, cp) = (v / sin).sin_cos();
                Vec3::new(sin * cp, sin * sp, *cos)
            }
            Repr::Arc(a) => a.position(v),
        }
    }

    /// Derivative of r of order 1 to 3.
    pub fn derivative(&self, v: f64, order: usize) -> Vec3 {
        match (&self.repr, order) {
            (_, 0) => self.position(v),
            (Repr::Great, k) => {
                let (s, c) = v.sin_cos();
                match k % 4 {
                    1 => Vec3::new(-s, c, 0.0),
                    2 => Vec3::new(-c, -s, 0.0),
                    3 => Vec3::new(s, -c, 0.0),
                    _ => Vec3::new(c, s, 0.0),
                }
            }
            (Repr::Small { sin, .. }, k) => {
                let (sp, cp) = (v / sin).sin_cos();
                let scale = sin.powi(1 - k as i32);
                let planar = match k % 4 {
                    1 => Vec3::new(-sp, cp, 0.0),
                    2 => Vec3::new(-cp, -sp, 0.0),
                    3 => Vec3::new(sp, -cp, 0.0),
                    _ => Vec3::new(cp, sp, 0.0),
                };
                planar * scale
            }
            (Repr::Arc(a), 1) => a.tangent(v),
            (Repr::Arc(a), 2) => a.second(v),
            (Repr::Arc(a), 3) => {
                let h = diff::default_step(1) * v.abs().max(1.0);
                let s = Stencil::new(1, v, h, f64::NEG_INFINITY, f64::INFINITY);
                s.points
                    .iter()
                    .zip(&s.weights)
                    .map(|(p, w)| a.second(*p) * *w)
                    .sum()
            }
            (Repr::Arc(_), k) => panic!("derivative order {k} not supported"),
        }
    }

    /// Frenet frame, spherical curvature κ = ⟨t', n⟩ and κ' = ⟨r''', n⟩.
    pub fn frenet(&self, v: f64) -> Result<FrenetSample> {
        let r = self.position(v);
        let deviation = r.norm() - 1.0;
        if !(deviation.abs() <= ON_SPHERE_TOL) {
            return Err(Error::OffSphere { v, deviation });
        }
        let t = self.derivative(v, 1);
        let deviation = t.norm() - 1.0;
        if !(deviation.abs() <= UNIT_SPEED_TOL) {
            return Err(Error::NotUnitSpeed { v, deviation });
        }
        let n = r.cross(t) * self.orientation;
        let kappa = self.derivative(v, 2).dot(n);
        // d/dv ⟨r'', n⟩ = ⟨r''', n⟩ + ⟨r'', −κ t⟩ and ⟨r'', t⟩ = 0.
        let kappa_prime = self.derivative(v, 3).dot(n);
        Ok(FrenetSample {
            r,
            t,
            n,
            kappa,
            kappa_prime,
        })
    }

    pub fn kappa(&self, v: f64) -> Result<f64> {
        Ok(self.frenet(v)?.kappa)
    }
}

/// Reparametrizes a raw spherical curve on `[w0, w1]` by arc length; the
/// result has domain `[0, L]` with `v = 0` at `w0`.
pub fn reparametrize_arclength<C: RawCurve + 'static>(
    raw: C,
    w0: f64,
    w1: f64,
) -> Result<SphericalCurve> {
    let curve = ArcLengthCurve::build(Arc::new(raw), w0, w1)?;
    let domain = Interval::new(0.0, curve.length());
    Ok(SphericalCurve {
        kind: CurveKind::Reparametrized,
        repr: Repr::Arc(Arc::new(curve)),
        domain,
        orientation: 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, PI};

    /// Central-difference oracle for κ = ⟨t', n⟩ using only positions.
    fn kappa_oracle(c: &SphericalCurve, v: f64) -> f64 {
        let h = 1e-4;
        let t = |x: f64| (c.position(x + h) - c.position(x - h)) / (2.0 * h);
        let tp = (t(v + h) - t(v - h)) / (2.0 * h);
        let n = c.position(v).cross(t(v).normalized());
        tp.dot(n)
    }

    #[test]
    fn great_circle_is_a_geodesic() {
        let c = SphericalCurve::great_circle(Interval::new(0.0, 2.0 * PI));
        for k in 0..20 {
            let f = c.frenet(k as f64 * 0.3).unwrap();
            assert_eq!(f.kappa, 0.0);
            assert!((f.n - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn small_circle_curvature_is_cot_theta() {
        for (theta, expected, oracle_tol) in [
            (FRAC_PI_4, 1.0, 1e-6),
            (FRAC_PI_3, 0.577_350_269_189_625_8, 1e-6),
        ] {
            let c = SphericalCurve::small_circle(theta, Interval::new(0.0, 3.0)).unwrap();
            for k in 0..30 {
                let v = k as f64 * 0.1;
                let oracle = kappa_oracle(&c, v);
                assert!((oracle - expected).abs() < oracle_tol, "oracle {oracle}");
                let f = c.frenet(v).unwrap();
                assert!((f.kappa - expected).abs() < 1e-12);
                assert!((f.kappa - 1.0 / theta.tan()).abs() < 1e-12);
                assert!(f.kappa_prime.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flipped_normal_negates_kappa() {
        let c = SphericalCurve::small_circle(FRAC_PI_4, Interval::new(0.0, 1.0)).unwrap();
        let f = c.with_flipped_normal().frenet(0.4).unwrap();
        assert!((f.kappa + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spiral_analytic_derivatives_match_differences() {
        let s = SphericalSpiral {
            slope: 0.3,
            base_colatitude: FRAC_PI_4,
        };
        for &w in &[-0.5, 0.2, 1.3] {
            let d1 = vec3_derivative(|x| s.position(x), w, 1);
            let d2 = vec3_derivative(|x| s.position(x), w, 2);
            assert!((d1 - s.velocity(w)).norm() < 1e-10);
            assert!((d2 - s.acceleration(w)).norm() < 1e-8);
        }
    }

    #[test]
    fn reparametrized_unit_speed_great_circle_is_identity() {
        let c = reparametrize_arclength(
            FnCurve(|w: f64| Vec3::new(w.cos(), w.sin(), 0.0)),
            0.0,
            2.0 * PI,
        )
        .unwrap();
        assert!((c.domain().hi - 2.0 * PI).abs() < 1e-10);
        for k in 0..=100 {
            let v = k as f64 * 0.0628;
            assert!((c.position(v) - Vec3::new(v.cos(), v.sin(), 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn reparametrized_double_speed_circle() {
        let c = reparametrize_arclength(
            FnCurve(|w: f64| Vec3::new((2.0 * w).cos(), (2.0 * w).sin(), 0.0)),
            0.0,
            1.5,
        )
        .unwrap();
        assert!((c.domain().hi - 3.0).abs() < 1e-9);
        for k in 1..30 {
            let v = k as f64 * 0.1;
            let h = 1e-5;
            let speed = ((c.position(v + h) - c.position(v - h)) / (2.0 * h)).norm();
            assert!((speed - 1.0).abs() < 1e-7, "speed {speed}");
            assert!((c.derivative(v, 1).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reparametrization_is_idempotent_on_unit_speed_curves() {
        let small = SphericalCurve::small_circle(1.0, Interval::new(0.0, 2.0)).unwrap();
        let inner = small.clone();
        let again = reparametrize_arclength(FnCurve(move |w| inner.position(w)), 0.0, 2.0).unwrap();
        for k in 0..=40 {
            let v = k as f64 * 0.05;
            assert!((again.position(v) - small.position(v)).norm() < 1e-7);
        }
    }

    #[test]
    fn spiral_is_unit_speed_with_varying_curvature() {
        let c = SphericalCurve::spiral(0.2, Interval::new(0.0, 3.0)).unwrap();
        let mut kappas = Vec::new();
        for k in 0..=60 {
            let v = k as f64 * 0.05;
            let h = 1e-5;
            let speed = ((c.position(v + h) - c.position(v - h)) / (2.0 * h)).norm();
            assert!((speed - 1.0).abs() < 1e-7, "speed {speed} at {v}");
            let f = c.frenet(v).unwrap();
            assert!((f.kappa - kappa_oracle(&c, v)).abs() < 1e-6);
            let kp_fd = diff::five_point(|x| c.kappa(x).unwrap(), v, 1e-3);
            assert!(
                (f.kappa_prime - kp_fd).abs() < 1e-8,
                "{} vs {kp_fd}",
                f.kappa_prime
            );
            kappas.push(f.kappa);
        }
        let spread = kappas.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - kappas.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread > 0.1, "spread {spread}");
        // v = 0 sits at w = 0.
        assert!(
            (c.position(0.0) - Vec3::new(FRAC_PI_4.sin(), 0.0, FRAC_PI_4.cos())).norm() < 1e-12
        );
    }

    #[test]
    fn rejects_off_sphere_and_stalled_curves() {
        let off =
            reparametrize_arclength(FnCurve(|w: f64| Vec3::new(w.cos(), w.sin(), 0.1)), 0.0, 1.0);
        assert!(matches!(off, Err(Error::OffSphere { .. })));
        let stalled = reparametrize_arclength(
            FnCurve(|w: f64| {
                let a = w * w * w;
                Vec3::new(a.cos(), a.sin(), 0.0)
            }),
            -0.5,
            0.5,
        );
        assert!(
            matches!(stalled, Err(Error::ZeroSpeed { .. })),
            "{stalled:?}"
        );
    }

    #[test]
    fn spiral_rejects_runaway_colatitude() {
        assert!(SphericalCurve::spiral(2.0, Interval::new(0.0, 5.0)).is_err());
    }
}
