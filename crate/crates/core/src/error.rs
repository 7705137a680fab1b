use thiserror::Error;

use crate::asymptotics::Zone;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected} sites, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("need at least {needed} consecutive snapshots, trajectory has {have}")]
    InsufficientSnapshots { needed: usize, have: usize },

    #[error("snapshots are not consecutive steps (cadence {cadence})")]
    NonConsecutiveSnapshots { cadence: usize },

    #[error("current is spacelike at site {site}: j0 = {j0}, j1 = {j1}")]
    SpacelikeCurrent { site: usize, j0: f64, j1: f64 },

    #[error("superluminal initial velocity |u| = {speed} at site {site}")]
    Superluminal { site: usize, speed: f64 },

    #[error("wavenumber {wavenumber} is not resolvable on {n_sites} sites")]
    Unresolvable { wavenumber: f64, n_sites: usize },

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {estimate:e})")]
    QuadratureNoConvergence { estimate: f64, tol: f64 },

    #[error("integration window too small: boundary contribution {estimate:e} exceeds {tol:e}")]
    WindowTooSmall { estimate: f64, tol: f64 },

    #[error("point (T = {t_param}, X = {x_param}) lies in zone {found:?}, not {expected:?}")]
    OutsideZone {
        expected: Zone,
        found: Zone,
        t_param: f64,
        x_param: f64,
    },

    #[error("degenerate saddle point: Φ''(u) = {curvature:e}")]
    DegenerateSaddle { curvature: f64 },

    #[error("field is not band-limited: top-third spectral energy fraction {ratio:e}")]
    BandLimit { ratio: f64 },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
