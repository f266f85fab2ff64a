//! Numerical toolkit for quaternionic slice analysis: quaternion algebra and
//! slice coordinates, σ-geometry and slice-set oracles, stem and slice
//! functions, two-slice extension, path lifting, and the branch-cut
//! construction on which the pointwise representation formula fails.

pub mod extension;
pub mod geometry;
pub mod harness;
pub mod par;
pub mod path;
pub mod pathslice;
pub mod quaternion;
pub mod sampling;
pub mod slicefn;
pub mod tolerance;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion is too close to zero to invert")]
    ZeroQuaternion,
    #[error("vector is not a unit imaginary quaternion")]
    NotUnit,
    #[error("units are not orthogonal")]
    NotOrthogonal,
    #[error("interpolation units are too close together")]
    DegeneratePair,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("point is not in the set")]
    NotInSet,
    #[error("point does not lie on the requested slice")]
    NotOnSlice,
    #[error("radius must be positive")]
    NonpositiveRadius,
    #[error("point is outside the function's domain")]
    OutOfDomain,
    #[error("point is outside the extension domain")]
    OutOfExtension,
    #[error("slice data disagree at a shared real point (gap {0:e})")]
    InconsistentRealData(f64),
    #[error("point lies on a branch cut")]
    OnCut,
    #[error("lift along unit {unit:?} leaves the domain at t = {t}")]
    LiftNotContained { unit: [f64; 3], t: f64 },
    #[error("a premise lift leaves the set")]
    PremiseFailed,
    #[error("need at least three units")]
    TooFewUnits,
    #[error("unit is outside the band 1 < |I - J| < 2")]
    UnitOutOfBand,
    #[error("config error: {0}")]
    ConfigParse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
