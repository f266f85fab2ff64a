//! Module-wide numerical tolerances. Each has a default constant; a
//! [`Tolerances`] value carries overrides from a run configuration.

use serde::{Deserialize, Serialize};

/// Unit-norm check for imaginary units and unit identity comparisons.
pub const TOL_UNIT: f64 = 1e-12;
/// Algebraic identities on composed products.
pub const TOL_ALG: f64 = 1e-12;
/// Minimum separation `|J - K|` for an interpolation pair.
pub const TOL_SEP: f64 = 1e-10;
/// Norm below which a quaternion is treated as non-invertible.
pub const TOL_ZERO: f64 = 1e-14;
/// Perpendicular thickness of a cut ray.
pub const TOL_RAY: f64 = 1e-9;
/// Sliceness / path-formula residual threshold.
pub const TOL_CHECK: f64 = 1e-9;
/// Cauchy-Riemann residual threshold for holomorphy certificates.
pub const TOL_CR: f64 = 1e-6;
/// Default finite-difference step.
pub const H_FD: f64 = 1e-4;
/// Default number of samples along a path.
pub const N_PATH: usize = 1024;
/// Default number of boundary probes for inradius estimates.
pub const N_PROBE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub unit: f64,
    pub alg: f64,
    pub sep: f64,
    pub zero: f64,
    pub ray: f64,
    pub check: f64,
    pub cr: f64,
    pub h_fd: f64,
    pub n_path: usize,
    pub n_probe: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit: TOL_UNIT,
            alg: TOL_ALG,
            sep: TOL_SEP,
            zero: TOL_ZERO,
            ray: TOL_RAY,
            check: TOL_CHECK,
            cr: TOL_CR,
            h_fd: H_FD,
            n_path: N_PATH,
            n_probe: N_PROBE,
        }
    }
}
