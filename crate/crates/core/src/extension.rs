//! Two-slice extension: holomorphic data on two slices `C_{I1}`, `C_{I2}`
//! determines a slice regular function on the union of the direct part
//! `U+` and the interpolated part `UΔ`. Also power series on σ-balls and a
//! finite-difference Cauchy-Riemann check.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{sigma_distance, SliceSet};
use crate::quaternion::{check_pair, embed, unit_of, ImaginaryUnit, Quaternion, SlicePoint, UnitOf};
use crate::slicefn::repformula_point;
use crate::tolerance::{H_FD, TOL_ALG, TOL_UNIT};
use crate::Error;

type OracleFn = dyn Fn(Complex64) -> Quaternion + Send + Sync;

/// How a slice function is evaluated at `z = x + yI` (complex coordinates in its own unit).
#[derive(Clone)]
pub enum SliceEvaluator {
    /// `sum (z - c)^n a_n` with right coefficients.
    Series { center: Complex64, radius: f64, coeffs: Vec<Quaternion> },
    Oracle(Arc<OracleFn>),
}

impl fmt::Debug for SliceEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceEvaluator::Series { center, radius, coeffs } => f
                .debug_struct("Series")
                .field("center", center)
                .field("radius", radius)
                .field("terms", &coeffs.len())
                .finish(),
            SliceEvaluator::Oracle(_) => f.write_str("Oracle"),
        }
    }
}

/// A holomorphic function on an open subset of one slice. The domain is a
/// [`SliceSet`] read only on `C_unit`.
#[derive(Clone, Debug)]
pub struct HolomorphicSliceData {
    pub unit: ImaginaryUnit,
    pub domain: SliceSet,
    pub eval: SliceEvaluator,
}

/// Value of [`holo_eval`]; series evaluation carries a truncation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoloValue {
    pub value: Quaternion,
    pub error_bound: Option<f64>,
}

/// `(z - c)^n` embedded in `C_unit`, times `a_n` on the right, summed cumulatively.
pub fn series_partial_sums(unit: &ImaginaryUnit, w: Complex64, coeffs: &[Quaternion]) -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(coeffs.len());
    let mut pw = Complex64::new(1.0, 0.0);
    let mut acc = Quaternion::zero();
    for a in coeffs {
        acc = acc + embed(unit, pw.re, pw.im) * *a;
        out.push(acc);
        pw *= w;
    }
    out
}

impl HolomorphicSliceData {
    /// Series data on the disk `B_I(center, radius)`.
    pub fn series(unit: ImaginaryUnit, center: Complex64, radius: f64, coeffs: Vec<Quaternion>) -> Result<Self, Error> {
        if radius <= 0.0 || radius.is_nan() {
            return Err(Error::NonpositiveRadius);
        }
        Ok(HolomorphicSliceData {
            unit,
            domain: SliceSet::SliceBall { unit, center: [center.re, center.im], radius },
            eval: SliceEvaluator::Series { center, radius, coeffs },
        })
    }

    pub fn oracle<F>(unit: ImaginaryUnit, domain: SliceSet, f: F) -> Self
    where
        F: Fn(Complex64) -> Quaternion + Send + Sync + 'static,
    {
        HolomorphicSliceData { unit, domain, eval: SliceEvaluator::Oracle(Arc::new(f)) }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.domain.contains_coords(&self.unit, z.re, z.im)
    }

    pub fn eval(&self, z: Complex64) -> Result<Quaternion, Error> {
        holo_eval(self, z).map(|v| v.value)
    }
}

/// Evaluates the data at `z`; series mode reports `|a|_max rho^(N+1) / (1 - rho)`, `rho = |z - c| / r`.
pub fn holo_eval(h: &HolomorphicSliceData, z: Complex64) -> Result<HoloValue, Error> {
    if !h.contains(z) {
        return Err(Error::OutOfDomain);
    }
    match &h.eval {
        SliceEvaluator::Series { center, radius, coeffs } => {
            let w = z - center;
            let rho = w.norm() / radius;
            if rho >= 1.0 {
                return Err(Error::OutOfDomain);
            }
            let value = series_partial_sums(&h.unit, w, coeffs).last().copied().unwrap_or_else(Quaternion::zero);
            let amax = coeffs.iter().map(Quaternion::norm).fold(0.0, f64::max);
            let bound = amax * rho.powi(coeffs.len() as i32) / (1.0 - rho);
            Ok(HoloValue { value, error_bound: Some(bound) })
        }
        SliceEvaluator::Oracle(f) => Ok(HoloValue { value: f(z), error_bound: None }),
    }
}

/// `|1/2 (d/dx + I d/dy) f|` at `(x, y)` by central differences.
pub fn cr_residual_fn<F>(f: F, unit: &ImaginaryUnit, x: f64, y: f64, step: f64) -> f64
where
    F: Fn(f64, f64) -> Quaternion,
{
    let dx = (f(x + step, y) - f(x - step, y)) * (0.5 / step);
    let dy = (f(x, y + step) - f(x, y - step)) * (0.5 / step);
    ((dx + unit.as_quaternion() * dy) * 0.5).norm()
}

/// Cauchy-Riemann residual of slice data; the stencil must lie in the domain.
pub fn cr_residual(h: &HolomorphicSliceData, z: Complex64, step: f64) -> Result<f64, Error> {
    let stencil = [
        z,
        z + Complex64::new(step, 0.0),
        z - Complex64::new(step, 0.0),
        z + Complex64::new(0.0, step),
        z - Complex64::new(0.0, step),
    ];
    if !stencil.iter().all(|p| h.contains(*p)) {
        return Err(Error::OutOfDomain);
    }
    let f = |x: f64, y: f64| h.eval(Complex64::new(x, y)).expect("stencil checked");
    Ok(cr_residual_fn(f, &h.unit, z.re, z.im, step))
}

/// `cr_residual` with the default step.
pub fn cr_residual_default(h: &HolomorphicSliceData, z: Complex64) -> Result<f64, Error> {
    cr_residual(h, z, H_FD)
}

/// Which part of the extension domain a point falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionPart {
    /// On `C_{I1}^+`, `C_{I2}^+`, or a shared real point.
    Direct,
    /// `x + yI1 in U1` and `x + yI2 in U2`.
    Interpolated,
}

/// The slice regular function determined by data on two distinct slices.
#[derive(Clone, Debug)]
pub struct ExtendedFunction {
    pub data1: HolomorphicSliceData,
    pub data2: HolomorphicSliceData,
}

impl ExtendedFunction {
    pub fn new(data1: HolomorphicSliceData, data2: HolomorphicSliceData) -> Result<Self, Error> {
        check_pair(&data1.unit, &data2.unit)?;
        Ok(ExtendedFunction { data1, data2 })
    }

    fn in1(&self, x: f64, y: f64) -> bool {
        self.data1.contains(Complex64::new(x, y))
    }

    fn in2(&self, x: f64, y: f64) -> bool {
        self.data2.contains(Complex64::new(x, y))
    }

    pub fn in_plus(&self, p: &SlicePoint) -> bool {
        if p.is_real {
            return self.in1(p.x, 0.0) && self.in2(p.x, 0.0);
        }
        (p.unit.approx_eq(&self.data1.unit, TOL_UNIT) && self.in1(p.x, p.y))
            || (p.unit.approx_eq(&self.data2.unit, TOL_UNIT) && self.in2(p.x, p.y))
    }

    pub fn in_delta(&self, p: &SlicePoint) -> bool {
        self.in1(p.x, p.y) && self.in2(p.x, p.y)
    }

    pub fn part(&self, p: &SlicePoint) -> Option<ExtensionPart> {
        if self.in_plus(p) {
            Some(ExtensionPart::Direct)
        } else if self.in_delta(p) {
            Some(ExtensionPart::Interpolated)
        } else {
            None
        }
    }

    pub fn contains(&self, q: &Quaternion) -> bool {
        self.part(&SlicePoint::from_quaternion(q)).is_some()
    }
}

/// Direct slice value on `U+`, otherwise
/// `g(x+yJ) = (J-I2)(I1-I2)^-1 f(x+yI1) + (J-I1)(I2-I1)^-1 f(x+yI2)`.
pub fn extend_pair_eval(e: &ExtendedFunction, q: &Quaternion) -> Result<Quaternion, Error> {
    extend_point_eval(e, &SlicePoint::from_quaternion(q))
}

pub fn extend_point_eval(e: &ExtendedFunction, p: &SlicePoint) -> Result<Quaternion, Error> {
    let z = Complex64::new(p.x, p.y);
    match e.part(p) {
        None => Err(Error::OutOfExtension),
        Some(ExtensionPart::Direct) => {
            if p.is_real {
                let a = e.data1.eval(z)?;
                let b = e.data2.eval(z)?;
                let gap = a.dist(&b);
                if gap > TOL_ALG * (1.0 + a.norm()) {
                    return Err(Error::InconsistentRealData(gap));
                }
                Ok(a)
            } else if p.unit.approx_eq(&e.data1.unit, TOL_UNIT) && e.data1.contains(z) {
                e.data1.eval(z)
            } else {
                e.data2.eval(z)
            }
        }
        Some(ExtensionPart::Interpolated) => {
            let f1 = e.data1.eval(z)?;
            let f2 = e.data2.eval(z)?;
            combine(&p.unit, &e.data1.unit, &e.data2.unit, &f1, &f2)
        }
    }
}

/// The two-slice combination, shared by the extension and σ-series evaluation.
fn combine(
    k: &ImaginaryUnit,
    i1: &ImaginaryUnit,
    i2: &ImaginaryUnit,
    f1: &Quaternion,
    f2: &Quaternion,
) -> Result<Quaternion, Error> {
    repformula_point(k, i1, i2, f1, f2)
}

/// Extension of `sum (z - c)^n a_n` from the disk `B_I(p, r)` of `C_I`, `I` the
/// unit of `p` (or `i` for real `p`), using the data on `(I, -I)`.
pub fn sigma_ball_extension(p: &Quaternion, r: f64, coeffs: Vec<Quaternion>) -> Result<ExtendedFunction, Error> {
    let sp = SlicePoint::from_quaternion(p);
    let unit = sp.unit;
    let d1 = HolomorphicSliceData::series(unit, Complex64::new(sp.x, sp.y), r, coeffs.clone())?;
    // the same disk read in C_{-I} coordinates
    let d2 = HolomorphicSliceData::series(unit.neg(), Complex64::new(sp.x, -sp.y), r, coeffs)?;
    ExtendedFunction::new(d1, d2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Convergent,
    Divergent,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    pub value: Quaternion,
    pub flag: Convergence,
    /// Root-test radius estimate from the last coefficients.
    pub radius: f64,
    pub sigma: f64,
}

/// Number of trailing terms used by the root test and the Cauchy check.
pub const TAIL_TERMS: usize = 20;
/// Partial sums in the tail must differ by at most this for a convergent flag.
pub const TAIL_BOUND: f64 = 1e-10;

/// `1 / max |a_n|^(1/n)` over the last [`TAIL_TERMS`] coefficients (`n >= 1`).
pub fn empirical_radius(coeffs: &[Quaternion]) -> f64 {
    let start = coeffs.len().saturating_sub(TAIL_TERMS).max(1);
    let m = (start..coeffs.len())
        .map(|n| coeffs[n].norm().powf(1.0 / n as f64))
        .fold(0.0, f64::max);
    if m == 0.0 {
        f64::INFINITY
    } else {
        1.0 / m
    }
}

fn classify(sums: &[Quaternion]) -> Convergence {
    if sums.len() < 2 {
        return Convergence::Convergent;
    }
    let start = sums.len().saturating_sub(TAIL_TERMS + 1);
    let diffs: Vec<f64> = sums[start..].windows(2).map(|w| w[1].dist(&w[0])).collect();
    let max = diffs.iter().copied().fold(0.0, f64::max);
    let min = diffs.iter().copied().fold(f64::INFINITY, f64::min);
    if max <= TAIL_BOUND {
        Convergence::Convergent
    } else if min > TAIL_BOUND && diffs[diffs.len() - 1] >= 0.5 * diffs[0] {
        // terms are not decaying: the partial sums do not settle
        Convergence::Divergent
    } else {
        Convergence::Undetermined
    }
}

/// `sum (q - p)^{*n} a_n` truncated at `n` terms. Off the slice of `p` the series is
/// summed at `x + yI` and `x - yI` and combined as in the two-slice extension.
pub fn sigma_series_eval(p: &Quaternion, coeffs: &[Quaternion], q: &Quaternion, n: usize) -> SeriesEval {
    let coeffs = &coeffs[..n.min(coeffs.len())];
    let radius = empirical_radius(coeffs);
    let sigma = sigma_distance(p, q);
    let sq = SlicePoint::from_quaternion(q);
    let unit = match unit_of(p) {
        UnitOf::Unit(u) => u,
        UnitOf::Real => sq.unit,
    };
    let sp = SlicePoint::from_quaternion(p);
    let (a, b) = sp.coords_in(&unit, TOL_UNIT).expect("p lies on its own slice");
    let sums: Vec<Quaternion> = match sq.coords_in(&unit, TOL_UNIT) {
        Some((x, y)) => series_partial_sums(&unit, Complex64::new(x - a, y - b), coeffs),
        None => {
            let plus = series_partial_sums(&unit, Complex64::new(sq.x - a, sq.y - b), coeffs);
            let minus = series_partial_sums(&unit, Complex64::new(sq.x - a, -sq.y - b), coeffs);
            plus.iter()
                .zip(&minus)
                .map(|(f1, f2)| combine(&sq.unit, &unit, &unit.neg(), f1, f2).expect("opposite units"))
                .collect()
        }
    };
    SeriesEval {
        value: sums.last().copied().unwrap_or_else(Quaternion::zero),
        flag: classify(&sums),
        radius,
        sigma,
    }
}
