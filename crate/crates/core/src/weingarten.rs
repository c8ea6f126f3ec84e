//! The Weingarten residual Φ = K_u H_v − K_v H_u and the case classifier.
//!
//! Φ is evaluated twice: from the factorization
//! Φ = −κκ'(f f''' − f'f'') / (2f³ √(κ² + (κ_α f + g')²)), and from raw
//! finite-difference partials of the closed-form K and H.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diff;
use crate::error::{Error, Result};
use crate::meridian::MeridianSurface;
use crate::profile::{self, FamilyParams, Profile};
use crate::spherical_curve::SphericalCurve;
use crate::{Interval, Rect};

/// Grid resolution used when none is given.
pub const DEFAULT_GRID: usize = 41;
/// Relative step of the raw Jacobian differences.
const JACOBIAN_STEP: f64 = 1e-4;
/// Width of the Indeterminate band around each tolerance.
pub const INDETERMINATE_FACTOR: f64 = 10.0;

/// An `nu × nv` grid of interior points of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub u: Interval,
    pub v: Interval,
}

impl GridSpec {
    pub fn interior(rect: Rect, nu: usize, nv: usize) -> Self {
        Self {
            nu,
            nv,
            u: rect.u,
            v: rect.v,
        }
    }

    pub fn default_for(rect: Rect) -> Self {
        Self::interior(rect, DEFAULT_GRID, DEFAULT_GRID)
    }

    pub fn us(&self) -> Vec<f64> {
        self.u.interior(self.nu)
    }

    pub fn vs(&self) -> Vec<f64> {
        self.v.interior(self.nv)
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order, u outer.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let vs = self.vs();
        self.us()
            .into_iter()
            .flat_map(|u| vs.iter().map(move |&v| (u, v)))
            .collect()
    }

    fn check(&self) -> Result<()> {
        if self.nu == 0 || self.nv == 0 {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        if !(self.u.width() > 0.0 && self.v.width() > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "degenerate grid rectangle u = {:?}, v = {:?}",
                self.u, self.v
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_kappa: f64,
    pub tol_alpha: f64,
    pub tol_ode: f64,
    /// Smallest max|Φ| accepted as evidence for NotWeingarten.
    pub residual_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_kappa: 1e-6,
            tol_alpha: 1e-6,
            tol_ode: 1e-7,
            residual_threshold: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    PlanarCaseI,
    #[serde(rename = "RuledE3_IIa")]
    RuledE3IIa,
    #[serde(rename = "CircleFamily_IIb")]
    CircleFamilyIIb,
    #[serde(rename = "RuledE4_IIIa")]
    RuledE4IIIa,
    #[serde(rename = "CoshFamily_IIIb")]
    CoshFamilyIIIb,
    NotWeingarten,
    Indeterminate,
}

impl CaseTag {
    pub const POSITIVE: [CaseTag; 5] = [
        CaseTag::PlanarCaseI,
        CaseTag::RuledE3IIa,
        CaseTag::CircleFamilyIIb,
        CaseTag::RuledE4IIIa,
        CaseTag::CoshFamilyIIIb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::PlanarCaseI => "PlanarCaseI",
            CaseTag::RuledE3IIa => "RuledE3_IIa",
            CaseTag::CircleFamilyIIb => "CircleFamily_IIb",
            CaseTag::RuledE4IIIa => "RuledE4_IIIa",
            CaseTag::CoshFamilyIIIb => "CoshFamily_IIIb",
            CaseTag::NotWeingarten => "NotWeingarten",
            CaseTag::Indeterminate => "Indeterminate",
        }
    }

    pub fn is_positive(&self) -> bool {
        Self::POSITIVE.contains(self)
    }

    /// Parses the short family names `i`, `iia`, `iib`, `iiia`, `iiib` as
    /// well as the full tag names.
    pub fn from_family(s: &str) -> Option<Self> {
        let lower = s.to_ascii_lowercase();
        let tag = match lower.as_str() {
            "i" | "planarcasei" => CaseTag::PlanarCaseI,
            "iia" | "rulede3_iia" => CaseTag::RuledE3IIa,
            "iib" | "circlefamily_iib" => CaseTag::CircleFamilyIIb,
            "iiia" | "rulede4_iiia" => CaseTag::RuledE4IIIa,
            "iiib" | "coshfamily_iiib" => CaseTag::CoshFamilyIIIb,
            _ => return None,
        };
        Some(tag)
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Φ on a grid. `None` entries are minimal points (H = 0), where the
/// residual is undefined.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualGrid {
    pub grid: GridSpec,
    /// Factorized form, row-major with u outer.
    pub analytic: Vec<Option<f64>>,
    /// Raw finite-difference Jacobian, same layout.
    pub jacobian: Vec<Option<f64>>,
    pub max_abs: f64,
    pub argmax: (f64, f64),
    pub max_abs_jacobian: f64,
    /// max |analytic − jacobian| over the grid.
    pub max_path_gap: f64,
    pub minimal_points: usize,
}

impl ResidualGrid {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.analytic[i * self.grid.nv + j]
    }
}

fn raw_jacobian(m: &MeridianSurface, u: f64, v: f64) -> Result<f64> {
    let hu = JACOBIAN_STEP * u.abs().max(1.0);
    let hv = JACOBIAN_STEP * v.abs().max(1.0);
    let h = |x: f64, y: f64| m.mean_curvature(x, y).unwrap_or(f64::NAN);
    let k_u = diff::five_point(|x| m.gauss_curvature(x, v), u, hu);
    let k_v = diff::five_point(|y| m.gauss_curvature(u, y), v, hv);
    let h_u = diff::five_point(|x| h(x, v), u, hu);
    let h_v = diff::five_point(|y| h(u, y), v, hv);
    let phi = k_u * h_v - k_v * h_u;
    if !phi.is_finite() {
        m.mean_curvature(u, v)?;
        return Err(Error::NonRegular {
            u,
            reason: format!("mean curvature undefined near v = {v}"),
        });
    }
    Ok(phi)
}

fn analytic_residual(m: &MeridianSurface, u: f64, v: f64) -> Result<f64> {
    let p = m.weingarten_partials(u, v)?;
    // K_v vanishes identically, so the factorized form is K_u H_v.
    Ok(p.k_u * p.h_v)
}

/// Evaluates Φ on `grid` along both paths.
pub fn residual(m: &MeridianSurface, grid: &GridSpec) -> Result<ResidualGrid> {
    grid.check()?;
    let points = grid.points();
    let values: Vec<Result<Option<(f64, f64)>>> = points
        .par_iter()
        .map(|&(u, v)| match analytic_residual(m, u, v) {
            Ok(a) => Ok(Some((a, raw_jacobian(m, u, v)?))),
            Err(Error::MinimalPoint { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut analytic = Vec::with_capacity(points.len());
    let mut jacobian = Vec::with_capacity(points.len());
    let mut max_abs = 0.0_f64;
    let mut argmax = points[0];
    let mut max_abs_jacobian = 0.0_f64;
    let mut max_path_gap = 0.0_f64;
    let mut minimal_points = 0;
    for (value, &pt) in values.into_iter().zip(&points) {
        match value? {
            Some((a, j)) => {
                if !a.is_finite() || !j.is_finite() {
                    return Err(Error::NonRegular {
                        u: pt.0,
                        reason: format!("non-finite residual at v = {}", pt.1),
                    });
                }
                if a.abs() > max_abs {
                    max_abs = a.abs();
                    argmax = pt;
                }
                max_abs_jacobian = max_abs_jacobian.max(j.abs());
                max_path_gap = max_path_gap.max((a - j).abs());
                analytic.push(Some(a));
                jacobian.push(Some(j));
            }
            None => {
                minimal_points += 1;
                analytic.push(None);
                jacobian.push(None);
            }
        }
    }
    Ok(ResidualGrid {
        grid: *grid,
        analytic,
        jacobian,
        max_abs,
        argmax,
        max_abs_jacobian,
        max_path_gap,
        minimal_points,
    })
}

/// The statistics the classifier consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evidence {
    /// max |κ| over the v grid.
    pub max_abs_kappa: f64,
    pub std_kappa: f64,
    pub max_abs_kappa_alpha: f64,
    pub std_kappa_alpha: f64,
    /// max |f''| over the u grid.
    pub max_abs_f2: f64,
    /// max |f f''' − f'f''| over the u grid.
    pub max_abs_ode: f64,
    /// max |Φ| (factorized form).
    pub max_residual: f64,
    pub max_residual_jacobian: f64,
    pub minimal_points: usize,
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Gathers the evidence record for `m` on `grid`.
pub fn evidence(m: &MeridianSurface, grid: &GridSpec) -> Result<(Evidence, ResidualGrid)> {
    let kappa = grid
        .vs()
        .into_iter()
        .map(|v| m.curve().kappa(v))
        .collect::<Result<Vec<_>>>()?;
    let jets: Vec<_> = grid.us().into_iter().map(|u| m.profile().jet(u)).collect();
    let kappa_alpha: Vec<f64> = jets.iter().map(|j| j.kappa_alpha()).collect();
    let res = residual(m, grid)?;
    let ev = Evidence {
        max_abs_kappa: max_abs(kappa.iter().copied()),
        std_kappa: sample_std(&kappa),
        max_abs_kappa_alpha: max_abs(kappa_alpha.iter().copied()),
        std_kappa_alpha: sample_std(&kappa_alpha),
        max_abs_f2: max_abs(jets.iter().map(|j| j.f2)),
        max_abs_ode: max_abs(jets.iter().map(|j| j.ode_residual())),
        max_residual: res.max_abs,
        max_residual_jacobian: res.max_abs_jacobian,
        minimal_points: res.minimal_points,
    };
    Ok((ev, res))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    Near,
    Above,
}

fn side(value: f64, tol: f64) -> Side {
    if value <= tol / INDETERMINATE_FACTOR {
        Side::Below
    } else if value > tol * INDETERMINATE_FACTOR {
        Side::Above
    } else {
        Side::Near
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeingartenVerdict {
    pub schema: u32,
    pub case: CaseTag,
    pub evidence: Option<Evidence>,
    pub tolerances: Tolerances,
    pub grid: GridSpec,
    pub max_residual: Option<f64>,
    /// The decisive comparison, in words.
    pub reason: String,
    /// Present when the verdict comes from evidence rather than proof.
    pub note: &'static str,
}

const EVIDENCE_NOTE: &str = "classification is evidence-based: sampled statistics are compared \
with tolerances and values within a factor 10 of a tolerance are reported as Indeterminate";

/// Decides the case from an evidence record.
pub fn decide(ev: &Evidence, tol: &Tolerances) -> (CaseTag, String) {
    use Side::*;
    let near = |what: &str, value: f64, t: f64| {
        (
            CaseTag::Indeterminate,
            format!("{what} = {value:.3e} lies within a factor 10 of its tolerance {t:.1e}"),
        )
    };
    let rejected = |why: String| {
        if ev.max_residual >= tol.residual_threshold {
            (
                CaseTag::NotWeingarten,
                format!("{why}; max|Φ| = {:.3e}", ev.max_residual),
            )
        } else {
            (
                CaseTag::Indeterminate,
                format!(
                    "{why}, but max|Φ| = {:.3e} is below the residual threshold {:.1e}",
                    ev.max_residual, tol.residual_threshold
                ),
            )
        }
    };
    match side(ev.max_abs_kappa, tol.tol_kappa) {
        Near => return near("max|κ|", ev.max_abs_kappa, tol.tol_kappa),
        Below => {
            return (
                CaseTag::PlanarCaseI,
                format!(
                    "max|κ| = {:.3e}: the directrix is a great circle",
                    ev.max_abs_kappa
                ),
            )
        }
        Above => {}
    }
    match side(ev.std_kappa, tol.tol_kappa) {
        Near => near("std κ", ev.std_kappa, tol.tol_kappa),
        Below => {
            let alpha = ev.std_kappa_alpha.max(ev.max_abs_kappa_alpha);
            match side(alpha, tol.tol_alpha) {
                Near => near("max(std κ_α, max|κ_α|)", alpha, tol.tol_alpha),
                Below => (
                    CaseTag::RuledE3IIa,
                    "κ constant and κ_α ≡ 0: circle directrix with straight meridian".into(),
                ),
                Above => match side(ev.std_kappa_alpha, tol.tol_alpha) {
                    Near => near("std κ_α", ev.std_kappa_alpha, tol.tol_alpha),
                    Below => (
                        CaseTag::CircleFamilyIIb,
                        "κ and κ_α both constant and nonzero".into(),
                    ),
                    Above => rejected(format!(
                        "κ constant but std κ_α = {:.3e}",
                        ev.std_kappa_alpha
                    )),
                },
            }
        }
        Above => match side(ev.max_abs_f2, tol.tol_alpha) {
            Near => near("max|f''|", ev.max_abs_f2, tol.tol_alpha),
            Below => (
                CaseTag::RuledE4IIIa,
                "κ non-constant and f'' ≡ 0: straight meridian".into(),
            ),
            Above => match side(ev.max_abs_ode, tol.tol_ode) {
                Near => near("max|f f''' − f'f''|", ev.max_abs_ode, tol.tol_ode),
                Below => (
                    CaseTag::CoshFamilyIIIb,
                    "κ non-constant and f f''' − f'f'' ≡ 0".into(),
                ),
                Above => rejected(format!(
                    "κ non-constant and max|f f''' − f'f''| = {:.3e}",
                    ev.max_abs_ode
                )),
            },
        },
    }
}

/// Classifies `m` on `grid`. Never fails: evaluation errors produce an
/// Indeterminate verdict carrying the error message.
pub fn classify(m: &MeridianSurface, grid: &GridSpec, tol: &Tolerances) -> WeingartenVerdict {
    match evidence(m, grid) {
        Ok((ev, _)) => {
            let (case, reason) = decide(&ev, tol);
            WeingartenVerdict {
                schema: 1,
                case,
                evidence: Some(ev),
                tolerances: *tol,
                grid: *grid,
                max_residual: Some(ev.max_residual),
                reason,
                note: EVIDENCE_NOTE,
            }
        }
        Err(e) => WeingartenVerdict {
            schema: 1,
            case: CaseTag::Indeterminate,
            evidence: None,
            tolerances: *tol,
            grid: *grid,
            max_residual: None,
            reason: format!("evaluation failed: {e}"),
            note: EVIDENCE_NOTE,
        },
    }
}

/// One pass/fail line of a family report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub schema: u32,
    pub family: CaseTag,
    pub params: FamilyParams,
    pub directrix: String,
    pub grid: GridSpec,
    pub constraint_residual: f64,
    pub max_residual: f64,
    pub max_residual_jacobian: f64,
    pub classification: CaseTag,
    pub round_trip: bool,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Directrix slope used for the canonical spiral scenes.
pub const CANONICAL_SPIRAL_SLOPE: f64 = 0.2;

/// u domain on which the circle family stays on its branch.
pub fn circle_domain(params: &FamilyParams) -> Interval {
    let centre = -params.c1;
    let half = 0.85 * FRAC_PI_2 / params.a.abs();
    Interval::new(centre - half, centre + half)
}

/// u domain on which the cosh family keeps |f'| ≤ 0.9.
pub fn cosh_domain(params: &FamilyParams) -> Interval {
    let b = params.b.abs();
    let reach = b * (0.9 * b / params.amplitude).asinh();
    let half = reach.min(1.0);
    Interval::new(-params.c - half, -params.c + half)
}

/// u domain for line profiles f = u cos β + 1.
pub fn line_domain(params: &FamilyParams) -> Interval {
    let cos = params.beta.cos();
    if cos >= 0.0 {
        Interval::new(0.5, 3.0)
    } else {
        // Keep f = u cos β + 1 above 0.25.
        Interval::new(0.0, (0.75 / -cos).min(3.0))
    }
}

/// The surface `verify_family` builds for each positive case.
pub fn canonical_surface(tag: CaseTag, params: &FamilyParams) -> Result<(MeridianSurface, String)> {
    let spiral = || SphericalCurve::spiral(CANONICAL_SPIRAL_SLOPE, Interval::new(0.5, 2.5));
    let line = |p: &FamilyParams| Profile::line(p.beta, 1.0, 0.0, line_domain(p), 1.0);
    let (curve, profile, name) = match tag {
        CaseTag::PlanarCaseI => (
            SphericalCurve::great_circle(Interval::new(0.0, 6.0)),
            profile::circle_arc_profile(params, circle_domain(params), 1.0)?,
            "great circle".to_string(),
        ),
        CaseTag::RuledE3IIa => (
            SphericalCurve::small_circle(FRAC_PI_4, Interval::new(0.0, 2.0))?,
            line(params)?,
            "small circle θ₀ = π/4".to_string(),
        ),
        CaseTag::CircleFamilyIIb => (
            SphericalCurve::small_circle(FRAC_PI_4, Interval::new(0.0, 2.0))?,
            profile::circle_arc_profile(params, circle_domain(params), 1.0)?,
            "small circle θ₀ = π/4".to_string(),
        ),
        CaseTag::RuledE4IIIa => (
            spiral()?,
            line(params)?,
            format!("spiral with slope {CANONICAL_SPIRAL_SLOPE}"),
        ),
        CaseTag::CoshFamilyIIIb => (
            spiral()?,
            profile::cosh_profile(params, cosh_domain(params), 1.0)?,
            format!("spiral with slope {CANONICAL_SPIRAL_SLOPE}"),
        ),
        CaseTag::NotWeingarten | CaseTag::Indeterminate => {
            return Err(Error::InvalidParameter(format!(
                "{tag} is not a positive case"
            )))
        }
    };
    Ok((MeridianSurface::new(curve, profile)?, name))
}

/// Builds the canonical surface for `tag` and checks it against the case.
/// `grid` defaults to 41 × 41 interior points of the surface's rectangle.
pub fn verify_family(
    tag: CaseTag,
    params: &FamilyParams,
    grid: Option<(usize, usize)>,
) -> Result<FamilyReport> {
    let (m, directrix) = canonical_surface(tag, params)?;
    let (nu, nv) = grid.unwrap_or((DEFAULT_GRID, DEFAULT_GRID));
    let grid = GridSpec::interior(m.rect(), nu, nv);
    let tol = Tolerances::default();
    let (ev, res) = evidence(&m, &grid)?;
    let (classification, _) = decide(&ev, &tol);
    let us = grid.us();
    let jets: Vec<_> = us.iter().map(|&u| m.profile().jet(u)).collect();
    let constraint = max_abs(jets.iter().map(|j| j.constraint_residual()));

    let mut checks = vec![
        Check::at_most("constraint f'² + g'² − 1", constraint, 1e-8),
        Check::at_most("max|Φ| factorized", res.max_abs, 1e-8),
        Check::at_most("max|Φ| raw Jacobian", res.max_abs_jacobian, 1e-5),
        Check::at_most("residual path gap", res.max_path_gap, 1e-5),
    ];
    match tag {
        CaseTag::PlanarCaseI => {
            checks.push(Check::at_most("max|κ|", ev.max_abs_kappa, tol.tol_kappa));
            let reference = m.analytic_frame(us[0], grid.vs()[0])?.n1;
            let mut drift = 0.0_f64;
            for (u, v) in grid.points() {
                drift = drift.max((m.analytic_frame(u, v)?.n1 - reference).norm());
            }
            checks.push(Check::at_most("N₁ variation", drift, 1e-9));
        }
        CaseTag::RuledE3IIa => {
            checks.push(Check::at_most("std κ", ev.std_kappa, tol.tol_kappa));
            checks.push(Check::at_most(
                "max|κ_α|",
                ev.max_abs_kappa_alpha,
                tol.tol_alpha,
            ));
        }
        CaseTag::CircleFamilyIIb => {
            checks.push(Check::at_most("std κ", ev.std_kappa, tol.tol_kappa));
            checks.push(Check::at_most("std κ_α", ev.std_kappa_alpha, 1e-8));
        }
        CaseTag::RuledE4IIIa => {
            checks.push(Check::at_most("max|f''|", ev.max_abs_f2, tol.tol_alpha));
            let k = max_abs(us.iter().map(|&u| m.gauss_curvature(u, 0.0)));
            checks.push(Check::at_most("max|K|", k, 1e-9));
        }
        CaseTag::CoshFamilyIIIb => {
            checks.push(Check::at_most("max|f f''' − f'f''|", ev.max_abs_ode, 1e-9));
            let target = -1.0 / (params.b * params.b);
            let k = max_abs(us.iter().map(|&u| m.gauss_curvature(u, 0.0) - target));
            checks.push(Check::at_most("max|K + 1/b²|", k, 1e-8));
        }
        CaseTag::NotWeingarten | CaseTag::Indeterminate => unreachable!(),
    }
    let round_trip = classification == tag;
    let pass = round_trip && checks.iter().all(|c| c.pass);
    Ok(FamilyReport {
        schema: 1,
        family: tag,
        params: *params,
        directrix,
        grid,
        constraint_residual: constraint,
        max_residual: res.max_abs,
        max_residual_jacobian: res.max_abs_jacobian,
        classification,
        round_trip,
        checks,
        pass,
    })
}

/// One row of the exported curvature field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRow {
    pub u: f64,
    pub v: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H1")]
    pub h1: f64,
    #[serde(rename = "H2")]
    pub h2: f64,
    pub kappa: f64,
    pub kappa_alpha: f64,
    /// NaN at minimal points.
    pub residual: f64,
}

/// Closed-form curvature data at every grid point, row-major, u outer.
pub fn curvature_field(m: &MeridianSurface, grid: &GridSpec) -> Result<Vec<FieldRow>> {
    grid.check()?;
    grid.points()
        .par_iter()
        .map(|&(u, v)| {
            let c = m.closed_curvature(u, v)?;
            let residual = match analytic_residual(m, u, v) {
                Ok(r) => r,
                Err(Error::MinimalPoint { .. }) => f64::NAN,
                Err(e) => return Err(e),
            };
            Ok(FieldRow {
                u,
                v,
                k: c.k,
                h: c.h,
                h1: c.h1,
                h2: c.h2,
                kappa: c.kappa,
                kappa_alpha: c.kappa_alpha,
                residual,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev() -> Evidence {
        Evidence {
            max_abs_kappa: 1.0,
            std_kappa: 0.0,
            max_abs_kappa_alpha: 1.0,
            std_kappa_alpha: 0.0,
            max_abs_f2: 1.0,
            max_abs_ode: 0.0,
            max_residual: 0.0,
            max_residual_jacobian: 0.0,
            minimal_points: 0,
        }
    }

    #[test]
    fn decision_order() {
        let tol = Tolerances::default();
        assert_eq!(decide(&ev(), &tol).0, CaseTag::CircleFamilyIIb);
        let e = Evidence {
            max_abs_kappa: 0.0,
            ..ev()
        };
        assert_eq!(decide(&e, &tol).0, CaseTag::PlanarCaseI);
        let e = Evidence {
            max_abs_kappa_alpha: 0.0,
            ..ev()
        };
        assert_eq!(decide(&e, &tol).0, CaseTag::RuledE3IIa);
        let e = Evidence {
            std_kappa: 0.1,
            max_abs_f2: 0.0,
            ..ev()
        };
        assert_eq!(decide(&e, &tol).0, CaseTag::RuledE4IIIa);
        let e = Evidence {
            std_kappa: 0.1,
            ..ev()
        };
        assert_eq!(decide(&e, &tol).0, CaseTag::CoshFamilyIIIb);
        let e = Evidence {
            std_kappa: 0.1,
            max_abs_ode: 1.0,
            max_residual: 1e-2,
            ..ev()
        };
        assert_eq!(decide(&e, &tol).0, CaseTag::NotWeingarten);
    }

    #[test]
    fn band_around_tolerance_is_indeterminate() {
        let tol = Tolerances::default();
        for value in [2e-7, 1e-6, 9e-6] {
            let e = Evidence {
                max_abs_kappa: value,
                ..ev()
            };
            assert_eq!(decide(&e, &tol).0, CaseTag::Indeterminate, "{value}");
        }
        let e = Evidence {
            std_kappa: 0.1,
            max_abs_ode: 5e-7,
            ..ev()
        };
        assert_eq!(decide(&e, &tol).0, CaseTag::Indeterminate);
    }

    #[test]
    fn rejection_without_residual_is_indeterminate() {
        let e = Evidence {
            std_kappa_alpha: 0.3,
            max_residual: 0.0,
            ..ev()
        };
        assert_eq!(decide(&e, &Tolerances::default()).0, CaseTag::Indeterminate);
    }

    #[test]
    fn tag_names_round_trip() {
        for tag in CaseTag::POSITIVE {
            let json = serde_json::to_string(&tag).unwrap();
            assert_eq!(json, format!("\"{}\"", tag.name()));
            assert_eq!(CaseTag::from_family(tag.name()), Some(tag));
        }
        assert_eq!(CaseTag::from_family("iiib"), Some(CaseTag::CoshFamilyIIIb));
        assert_eq!(CaseTag::from_family("v"), None);
    }

    #[test]
    fn sample_std_matches_definition() {
        assert_eq!(sample_std(&[1.0, 1.0, 1.0]), 0.0);
        assert!((sample_std(&[1.0, 2.0, 3.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_layout() {
        let g = GridSpec::interior(
            Rect::new(Interval::new(0.0, 1.0), Interval::new(0.0, 2.0)),
            3,
            2,
        );
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], (0.25, 2.0 / 3.0));
        assert_eq!(pts[1], (0.25, 4.0 / 3.0));
        assert_eq!(pts[2].0, 0.5);
    }
}
