use thiserror::Error;

/// Errors raised while building or evaluating curves, profiles and patches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate basis: normalized Gram determinant {gram:e} below tolerance")]
    DegenerateBasis { gram: f64 },
    #[error("seed vectors exhausted before the frame was complete")]
    SeedsExhausted,
    #[error("curve leaves the unit sphere at v = {v}: |r| - 1 = {deviation:e}")]
    OffSphere { v: f64, deviation: f64 },
    #[error("curve is not unit speed at v = {v}: |r'| - 1 = {deviation:e}")]
    NotUnitSpeed { v: f64, deviation: f64 },
    #[error("raw curve speed {speed:e} vanishes near w = {w}")]
    ZeroSpeed { w: f64, speed: f64 },
    #[error("domain crosses a zero of cos(a u + a c1) near u = {u}")]
    BranchViolation { u: f64 },
    #[error("profile slope |f'| = {slope} exceeds the admissible bound near u = {u}")]
    SpeedViolation { u: f64, slope: f64 },
    #[error("non-regular point at u = {u}: {reason}")]
    NonRegular { u: f64, reason: String },
    #[error("g'(u) = {value:e} vanishes at u = {u}")]
    GPrimeZero { u: f64, value: f64 },
    #[error("mean curvature vanishes at (u, v) = ({u}, {v})")]
    MinimalPoint { u: f64, v: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
