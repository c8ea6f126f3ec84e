//! Generic curvature pipeline for regular patches X(u, v) in E⁴.
//!
//! With tangent partials X_u, X_v and an orthonormal normal frame {N₁, N₂}:
//!
//! ```text
//! E = ⟨X_u, X_u⟩,  F = ⟨X_u, X_v⟩,  G = ⟨X_v, X_v⟩,  W² = EG − F²
//! c^k_ij = ⟨X_ij, N_k⟩
//! K = (1/W²) Σ_k (c^k_11 c^k_22 − (c^k_12)²)
//! H⃗ = (1/2W²) Σ_k (c^k_11 G + c^k_22 E − 2 c^k_12 F) N_k
//! ```
//!
//! Partials come from fourth-order finite differences unless the patch
//! supplies them. The normal frame comes from Gram–Schmidt on the canonical
//! basis unless the patch (or the caller) supplies one.

use rayon::prelude::*;
use serde::Serialize;

use crate::diff::{default_step, Stencil};
use crate::error::{Error, Result};
use crate::euclid::{canonical_seeds, gram_schmidt, Vec4};
use crate::Rect;

/// Minimum W² = EG − F² of a regular point.
pub const REGULARITY_TOL: f64 = 1e-10;

/// An immersed parameter patch in E⁴.
pub trait Patch: Sync {
    fn position(&self, u: f64, v: f64) -> Vec4;

    fn domain(&self) -> Rect;

    /// Closed-form partials up to second order, when available.
    fn analytic_partials(&self, _u: f64, _v: f64) -> Option<Jet> {
        None
    }

    /// A preferred orthonormal normal frame, when the patch has one.
    fn normal_frame(&self, _u: f64, _v: f64) -> Option<[Vec4; 2]> {
        None
    }
}

/// A patch given by a closure.
pub struct FnPatch<F> {
    pub f: F,
    pub domain: Rect,
}

impl<F: Fn(f64, f64) -> Vec4 + Sync> Patch for FnPatch<F> {
    fn position(&self, u: f64, v: f64) -> Vec4 {
        (self.f)(u, v)
    }

    fn domain(&self) -> Rect {
        self.domain
    }
}

/// Mixed partials ∂^{i+j}X / ∂u^i ∂v^j for i + j ≤ `order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub order: usize,
    d: [[Vec4; 4]; 4],
}

impl Jet {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            d: [[Vec4::ZERO; 4]; 4],
        }
    }

    pub fn get(&self, du: usize, dv: usize) -> Vec4 {
        assert!(
            du + dv <= self.order,
            "partial of order {} not in jet",
            du + dv
        );
        self.d[du][dv]
    }

    pub fn set(&mut self, du: usize, dv: usize, value: Vec4) {
        self.d[du][dv] = value;
    }

    pub fn xu(&self) -> Vec4 {
        self.get(1, 0)
    }

    pub fn xv(&self) -> Vec4 {
        self.get(0, 1)
    }

    pub fn xuu(&self) -> Vec4 {
        self.get(2, 0)
    }

    pub fn xuv(&self) -> Vec4 {
        self.get(1, 1)
    }

    pub fn xvv(&self) -> Vec4 {
        self.get(0, 2)
    }
}

fn axis_stencil(order: usize, x: f64, lo: f64, hi: f64) -> Stencil {
    let h = default_step(order) * x.abs().max(1.0);
    Stencil::new(order, x, h, lo, hi)
}

/// Finite-difference partials of `p` up to `order` (≤ 3). Stencils are
/// central away from the domain boundary and one-sided within reach of it.
pub fn partials<P: Patch + ?Sized>(p: &P, u: f64, v: f64, order: usize) -> Jet {
    assert!(order <= 3, "partials above third order are not supported");
    let dom = p.domain();
    let mut jet = Jet::new(order);
    for du in 0..=order {
        let su = axis_stencil(du, u, dom.u.lo, dom.u.hi);
        for dv in 0..=(order - du) {
            let sv = axis_stencil(dv, v, dom.v.lo, dom.v.hi);
            let mut acc = Vec4::ZERO;
            for (pu, wu) in su.points.iter().zip(&su.weights) {
                for (pv, wv) in sv.points.iter().zip(&sv.weights) {
                    acc += p.position(*pu, *pv) * (wu * wv);
                }
            }
            jet.set(du, dv, acc);
        }
    }
    jet
}

fn second_order_jet<P: Patch + ?Sized>(p: &P, u: f64, v: f64) -> Jet {
    p.analytic_partials(u, v)
        .unwrap_or_else(|| partials(p, u, v, 2))
}

/// Coefficients of the first fundamental form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstForm {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "W2")]
    pub w2: f64,
}

impl FirstForm {
    fn from_jet(jet: &Jet, u: f64) -> Result<Self> {
        let (xu, xv) = (jet.xu(), jet.xv());
        let e = xu.norm_squared();
        let f = xu.dot(xv);
        let g = xv.norm_squared();
        let w2 = e * g - f * f;
        if !(w2 >= REGULARITY_TOL) {
            return Err(Error::NonRegular {
                u,
                reason: format!("W² = EG − F² = {w2:e}"),
            });
        }
        Ok(Self { e, f, g, w2 })
    }
}

/// Second fundamental coefficients along one normal; symmetric in (i, j).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalCoefficients {
    pub c11: f64,
    pub c12: f64,
    pub c22: f64,
}

impl NormalCoefficients {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (1, 1) => self.c11,
            (1, 2) | (2, 1) => self.c12,
            (2, 2) => self.c22,
            _ => panic!("index ({i}, {j}) out of range"),
        }
    }
}

/// Normal frame and the coefficients c^k_ij = ⟨X_ij, N_k⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondForm {
    pub normals: [Vec4; 2],
    pub coefficients: [NormalCoefficients; 2],
}

impl SecondForm {
    /// c^k_ij with 1-based indices as usually written.
    pub fn c(&self, k: usize, i: usize, j: usize) -> f64 {
        self.coefficients[k - 1].get(i, j)
    }

    fn from_jet(jet: &Jet, normals: [Vec4; 2]) -> Self {
        let coeff = |n: Vec4| NormalCoefficients {
            c11: jet.xuu().dot(n),
            c12: jet.xuv().dot(n),
            c22: jet.xvv().dot(n),
        };
        Self {
            normals,
            coefficients: [coeff(normals[0]), coeff(normals[1])],
        }
    }
}

pub type Mat2 = [[f64; 2]; 2];

/// Curvature data at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvaturePoint {
    pub first: FirstForm,
    pub second: SecondForm,
    #[serde(rename = "K")]
    pub k: f64,
    /// Components of H⃗ along N₁ and N₂.
    pub hvec: [f64; 2],
    #[serde(rename = "H")]
    pub h: f64,
    /// Shape operators A_{N₁}, A_{N₂} in the orthonormal tangent frame
    /// {X_u/√E, (X_v − (F/E) X_u)/|…|}.
    pub shape: [Mat2; 2],
}

impl CurvaturePoint {
    fn assemble(first: FirstForm, second: SecondForm) -> Self {
        let FirstForm { e, f, g, w2 } = first;
        let mut k = 0.0;
        let mut hvec = [0.0; 2];
        let mut shape = [[[0.0; 2]; 2]; 2];
        // Rows of P express the orthonormal tangent frame in {X_u, X_v}.
        let n2 = (w2 / e).sqrt();
        let p = [[1.0 / e.sqrt(), 0.0], [-f / (e * n2), 1.0 / n2]];
        for (idx, c) in second.coefficients.iter().enumerate() {
            k += c.c11 * c.c22 - c.c12 * c.c12;
            hvec[idx] = (c.c11 * g + c.c22 * e - 2.0 * c.c12 * f) / (2.0 * w2);
            let cm = [[c.c11, c.c12], [c.c12, c.c22]];
            for a in 0..2 {
                for b in 0..2 {
                    let mut s = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            s += p[a][i] * cm[i][j] * p[b][j];
                        }
                    }
                    shape[idx][a][b] = s;
                }
            }
        }
        k /= w2;
        let h = (hvec[0] * hvec[0] + hvec[1] * hvec[1]).sqrt();
        Self {
            first,
            second,
            k,
            hvec,
            h,
            shape,
        }
    }

    /// Orthonormal tangent frame matching [`Self::shape`], from the partials.
    pub fn tangent_frame(jet: &Jet) -> [Vec4; 2] {
        let e1 = jet.xu().normalized();
        let e2 = (jet.xv() - e1 * jet.xv().dot(e1)).normalized();
        [e1, e2]
    }
}

pub fn first_form<P: Patch + ?Sized>(p: &P, u: f64, v: f64) -> Result<FirstForm> {
    FirstForm::from_jet(&second_order_jet(p, u, v), u)
}

fn generic_normals(jet: &Jet) -> Result<[Vec4; 2]> {
    let n = gram_schmidt(&[jet.xu(), jet.xv()], &canonical_seeds())?;
    Ok([n[0], n[1]])
}

/// Second fundamental coefficients in the patch's preferred frame, or in
/// the Gram–Schmidt frame seeded by e₁..e₄.
pub fn second_form<P: Patch + ?Sized>(p: &P, u: f64, v: f64) -> Result<SecondForm> {
    let jet = second_order_jet(p, u, v);
    FirstForm::from_jet(&jet, u)?;
    let normals = match p.normal_frame(u, v) {
        Some(n) => n,
        None => generic_normals(&jet)?,
    };
    Ok(SecondForm::from_jet(&jet, normals))
}

/// Second fundamental coefficients in a caller-chosen normal frame.
pub fn second_form_in_frame<P: Patch + ?Sized>(
    p: &P,
    u: f64,
    v: f64,
    normals: [Vec4; 2],
) -> Result<SecondForm> {
    let jet = second_order_jet(p, u, v);
    FirstForm::from_jet(&jet, u)?;
    Ok(SecondForm::from_jet(&jet, normals))
}

pub fn curvature<P: Patch + ?Sized>(p: &P, u: f64, v: f64) -> Result<CurvaturePoint> {
    let jet = second_order_jet(p, u, v);
    let first = FirstForm::from_jet(&jet, u)?;
    let normals = match p.normal_frame(u, v) {
        Some(n) => n,
        None => generic_normals(&jet)?,
    };
    Ok(CurvaturePoint::assemble(
        first,
        SecondForm::from_jet(&jet, normals),
    ))
}

pub fn curvature_in_frame<P: Patch + ?Sized>(
    p: &P,
    u: f64,
    v: f64,
    normals: [Vec4; 2],
) -> Result<CurvaturePoint> {
    let jet = second_order_jet(p, u, v);
    let first = FirstForm::from_jet(&jet, u)?;
    Ok(CurvaturePoint::assemble(
        first,
        SecondForm::from_jet(&jet, normals),
    ))
}

/// Evaluates [`curvature`] on every (u, v) pair, row-major with u outer.
pub fn curvature_grid<P: Patch + ?Sized>(
    p: &P,
    us: &[f64],
    vs: &[f64],
) -> Vec<Result<CurvaturePoint>> {
    us.par_iter()
        .flat_map_iter(|&u| vs.iter().map(move |&v| curvature(p, u, v)))
        .collect()
}
