//! Meridian surfaces in Euclidean 4-space.
//!
//! A meridian surface is `X(u, v) = f(u) r(v) + g(u) e₄`, built from a
//! unit-speed profile `(f, g)` and a unit-speed curve `r` on the unit
//! 2-sphere. This crate evaluates their fundamental forms and curvatures in
//! closed form ([`meridian`]) and through a generic finite-difference
//! pipeline for arbitrary patches in E⁴ ([`patch`]), evaluates the Weingarten
//! Jacobian `K_u H_v − K_v H_u`, and classifies surfaces into the known
//! Weingarten families ([`weingarten`]).

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod diff;
pub mod error;
pub mod euclid;
pub mod expr;
pub mod meridian;
pub mod patch;
pub mod profile;
pub mod quad;
pub mod scene;
pub mod spherical_curve;
pub mod weingarten;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use euclid::{Vec3, Vec4};
pub use meridian::{MeridianCurvature, MeridianSurface};
pub use patch::{CurvaturePoint, FirstForm, Patch, SecondForm};
pub use profile::{FamilyParams, Profile, ProfileKind};
pub use spherical_curve::{CurveKind, FrenetSample, SphericalCurve};
pub use weingarten::{CaseTag, GridSpec, ResidualGrid, Tolerances, WeingartenVerdict};

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// `n` equally spaced points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.5 * (self.lo + self.hi)],
            _ => {
                let step = self.width() / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i + 1 == n {
                            self.hi
                        } else {
                            self.lo + i as f64 * step
                        }
                    })
                    .collect()
            }
        }
    }

    /// `n` equally spaced points strictly inside the interval.
    pub fn interior(&self, n: usize) -> Vec<f64> {
        let step = self.width() / (n + 1) as f64;
        (1..=n).map(|i| self.lo + i as f64 * step).collect()
    }
}

/// A parameter rectangle `I × J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u: Interval,
    pub v: Interval,
}

impl Rect {
    pub const fn new(u: Interval, v: Interval) -> Self {
        Self { u, v }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_sampling() {
        let i = Interval::new(0.0, 1.0);
        assert_eq!(i.linspace(3), vec![0.0, 0.5, 1.0]);
        assert_eq!(i.interior(3), vec![0.25, 0.5, 0.75]);
        assert!(i.interior(41).iter().all(|&x| x > 0.0 && x < 1.0));
    }
}
