//! Path lifts, the path form of the two-slice representation formula, the
//! `Psi_phi` counterexample to the pointwise formula, and the lifting
//! witness search.

pub mod branch;
pub mod model;

use serde::{Deserialize, Serialize};

pub use branch::{cut_jump, psi_phi_eval, psi_s_eval, psi_s_raw, BranchFunction, JumpProbe, PsiPhi};
pub use model::{ExtensionModel, FnModel, PolynomialModel, SliceModel};

use crate::geometry::{path_in_set, Phi, SliceSet};
use crate::par;
use crate::path::ComplexPath;
use crate::quaternion::{check_pair, ImaginaryUnit, Quaternion, SlicePoint};
use crate::sampling::{random_unit, rng};
use crate::slicefn::{repformula_point, stem_from_pair};
use crate::Error;

fn require_lift<M: SliceModel + ?Sized>(f: &M, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> Result<(), Error> {
    let c = f.lift_containment(path, unit, n);
    if c.contained {
        Ok(())
    } else {
        Err(Error::LiftNotContained { unit: unit.to_array(), t: c.exit_t.unwrap_or(0.0) })
    }
}

fn eval_on_lift<M: SliceModel + ?Sized>(f: &M, path: &ComplexPath, unit: &ImaginaryUnit, t: f64) -> Result<Quaternion, Error> {
    let (x, y) = path.point_at(t);
    f.eval(&SlicePoint::new(*unit, x, y))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFormulaReport {
    pub params: Vec<f64>,
    /// `(I-K)(J-K)^-1 f(gamma^J) + (I-J)(K-J)^-1 f(gamma^K)` at each parameter.
    pub formula: Vec<Quaternion>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Compares `f o gamma^I` with the two-slice formula built from `f o gamma^J`, `f o gamma^K`.
pub fn path_repformula<M: SliceModel + ?Sized>(
    f: &M,
    path: &ComplexPath,
    i: &ImaginaryUnit,
    j: &ImaginaryUnit,
    k: &ImaginaryUnit,
    n: usize,
) -> Result<PathFormulaReport, Error> {
    check_pair(j, k)?;
    for u in [i, j, k] {
        require_lift(f, path, u, n)?;
    }
    let params = path.sample_params(n);
    let rows: Vec<Result<(Quaternion, f64), Error>> = par::map(&params, |&t| {
        let fi = eval_on_lift(f, path, i, t)?;
        let fj = eval_on_lift(f, path, j, t)?;
        let fk = eval_on_lift(f, path, k, t)?;
        let rhs = repformula_point(i, j, k, &fj, &fk)?;
        Ok((rhs, fi.dist(&rhs)))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (formula, residuals): (Vec<Quaternion>, Vec<f64>) = rows.into_iter().unzip();
    let max_residual = par::max_f64(&residuals);
    Ok(PathFormulaReport { params, formula, residuals, max_residual })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// `q_gamma`, with `f o gamma^I(1) = q_gamma[0] + I q_gamma[1]`.
    pub q_gamma: [Quaternion; 2],
    pub defects: Vec<f64>,
    pub max_defect: f64,
    /// Sign relating the general path to its upper reduction.
    pub eps: f64,
    pub reduced: bool,
}

/// Solves `q_gamma` from the first two units and reports `|f o gamma^I(1) - (1, I) q_gamma|`
/// for the rest. A path dipping below the real axis is replaced by its upper
/// reduction `delta` with `gamma^I(1) = delta^{eps I}(1)`.
pub fn path_slice_consistency<M: SliceModel + ?Sized>(
    f: &M,
    path: &ComplexPath,
    units: &[ImaginaryUnit],
    n: usize,
) -> Result<ConsistencyReport, Error> {
    if units.len() < 3 {
        return Err(Error::TooFewUnits);
    }
    check_pair(&units[0], &units[1])?;
    for u in units {
        require_lift(f, path, u, n)?;
    }
    let (end_path, eps, reduced) = if path.is_upper() {
        (Some(path.clone()), 1.0, false)
    } else {
        let (d, eps) = path.upper_reduction();
        (d, eps, true)
    };
    let endpoint = |u: &ImaginaryUnit| -> Result<Quaternion, Error> {
        match &end_path {
            Some(d) => {
                let (x, y) = d.end();
                f.eval(&SlicePoint::new(*u * eps, x, y))
            }
            None => f.eval(&SlicePoint::real(path.end().0)),
        }
    };
    let values: Vec<Quaternion> = units.iter().map(endpoint).collect::<Result<_, _>>()?;
    let (a, b) = stem_from_pair(&units[0], &units[1], &values[0], &values[1])?;
    let defects: Vec<f64> = units[2..]
        .iter()
        .zip(&values[2..])
        .map(|(u, v)| v.dist(&(a + u.as_quaternion() * b)))
        .collect();
    let max_defect = par::max_f64(&defects);
    Ok(ConsistencyReport { q_gamma: [a, b], defects, max_defect, eps, reduced })
}

impl std::ops::Mul<f64> for ImaginaryUnit {
    type Output = ImaginaryUnit;
    /// Sign flip for `rhs = ±1`.
    fn mul(self, rhs: f64) -> ImaginaryUnit {
        if rhs < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRow {
    pub unit: ImaginaryUnit,
    pub phi: f64,
    /// `Psi_phi(I) - [(1-IJ)/2 Psi_phi(J) + (1+IJ)/2 Psi_phi(-J)]`.
    pub residual: Quaternion,
    pub residual_norm: f64,
    /// `(1-IJ) Psi_{phi(I)}(J)`.
    pub closed_form: Quaternion,
    pub gap: f64,
    /// `|1 - IJ|`.
    pub expected_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub base: ImaginaryUnit,
    pub rows: Vec<CounterexampleRow>,
    pub max_gap: f64,
    pub min_residual_norm: f64,
}

/// Pointwise formula with `(J, -J)` applied to `Psi_phi` at `q = I`, for
/// `phi(K) = |K - J| / 2` and units with `1/2 < phi(I) < 1`.
pub fn counterexample_report(base: &ImaginaryUnit, units: &[ImaginaryUnit]) -> Result<CounterexampleReport, Error> {
    let phi = Phi::HalfDistance;
    let f = PsiPhi::new(*base, phi.clone());
    let at_j = f.eval(&SlicePoint::new(*base, 0.0, 1.0))?;
    let at_neg_j = f.eval(&SlicePoint::new(base.neg(), 0.0, 1.0))?;
    let jq = base.as_quaternion();
    let mut rows = Vec::with_capacity(units.len());
    for u in units {
        let s = phi.eval(base, u);
        if !(s > 0.5 && s < 1.0) {
            return Err(Error::UnitOutOfBand);
        }
        let ij = u.as_quaternion() * jq;
        let a = (Quaternion::one() - ij) * 0.5;
        let b = (Quaternion::one() + ij) * 0.5;
        let residual = f.eval(&SlicePoint::new(*u, 0.0, 1.0))? - (a * at_j + b * at_neg_j);
        let closed_form = (Quaternion::one() - ij) * psi_s_eval(&BranchFunction::new(*base, s), num_complex::Complex64::new(0.0, 1.0))?;
        rows.push(CounterexampleRow {
            unit: *u,
            phi: s,
            residual,
            residual_norm: residual.norm(),
            closed_form,
            gap: residual.dist(&closed_form),
            expected_norm: (Quaternion::one() - ij).norm(),
        });
    }
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    let min_residual_norm = rows.iter().map(|r| r.residual_norm).fold(f64::INFINITY, f64::min);
    Ok(CounterexampleReport { base: *base, rows, max_gap, min_residual_norm })
}

/// A unit whose lift leaves the set while the premise lifts stay inside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub unit: ImaginaryUnit,
    pub exit_t: f64,
}

fn check_premises(set: &SliceSet, path: &ComplexPath, j: &ImaginaryUnit, k: &ImaginaryUnit, n: usize) -> Result<(), Error> {
    if path_in_set(set, path, j, n).contained && path_in_set(set, path, k, n).contained {
        Ok(())
    } else {
        Err(Error::PremiseFailed)
    }
}

/// All candidate units whose lift of `gamma` leaves `set`, in candidate order,
/// given that the lifts along `J` and `K` stay inside.
pub fn lifting_witnesses(
    set: &SliceSet,
    path: &ComplexPath,
    j: &ImaginaryUnit,
    k: &ImaginaryUnit,
    candidates: &[ImaginaryUnit],
    n: usize,
) -> Result<Vec<Witness>, Error> {
    check_premises(set, path, j, k, n)?;
    let res = par::map(candidates, |u| path_in_set(set, path, u, n));
    Ok(candidates
        .iter()
        .zip(res)
        .filter_map(|(u, c)| c.exit_t.map(|t| Witness { unit: *u, exit_t: t }))
        .collect())
}

/// First witness of [`lifting_witnesses`], if any.
pub fn lifting_witness_search(
    set: &SliceSet,
    path: &ComplexPath,
    j: &ImaginaryUnit,
    k: &ImaginaryUnit,
    candidates: &[ImaginaryUnit],
    n: usize,
) -> Result<Option<Witness>, Error> {
    Ok(lifting_witnesses(set, path, j, k, candidates, n)?.into_iter().next())
}

/// `count` units `theta_k = k pi / count` along the great circle from `J` toward
/// `J.orthogonal()` (ending at `-J`), then `random` seeded uniform units.
pub fn default_candidates(j: &ImaginaryUnit, count: usize, random: usize, seed: u64) -> Vec<ImaginaryUnit> {
    let o = j.orthogonal();
    let mut out: Vec<ImaginaryUnit> = (1..=count)
        .map(|k| j.rotate_toward(&o, std::f64::consts::PI * k as f64 / count as f64))
        .collect();
    let mut r = rng(seed);
    out.extend((0..random).map(|_| random_unit(&mut r)));
    out
}

/// Path whose horizontal end segment crosses the cut of every unit at angle
/// at least about 76 degrees from `J`, while staying left of the cuts near `J`.
pub fn default_witness_path() -> ComplexPath {
    ComplexPath::new(vec![(0.0, 0.0), (-0.2, 0.0), (-0.2, 0.784), (-0.05, 0.784)]).expect("valid polyline")
}

/// A unit within distance `0.2` of `J`, tilted away from the candidate great circle.
pub fn default_premise_unit(j: &ImaginaryUnit) -> ImaginaryUnit {
    let o = j.orthogonal();
    let o2 = j.cross(&o).expect("orthogonal units");
    j.rotate_toward(&o2, 0.15)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub unit: ImaginaryUnit,
    pub probes: usize,
    /// Largest `|f(p + d) - f(p)| / |d|` seen over all probe points and steps.
    pub max_ratio: f64,
    pub bound: f64,
    pub continuous: bool,
}

/// Finite-difference continuity probe of `f` on one slice: increments at steps
/// `deltas` in the four axis directions must stay below `bound * |d|`.
pub fn continuity_probe<M: SliceModel + ?Sized>(
    f: &M,
    unit: &ImaginaryUnit,
    points: &[(f64, f64)],
    deltas: &[f64],
    bound: f64,
) -> ContinuityReport {
    let ratios: Vec<f64> = par::map(points, |&(x, y)| {
        let Ok(v) = f.eval(&SlicePoint::new(*unit, x, y)) else { return 0.0 };
        let mut worst: f64 = 0.0;
        for &d in deltas {
            for (dx, dy) in [(d, 0.0), (-d, 0.0), (0.0, d), (0.0, -d)] {
                if let Ok(w) = f.eval(&SlicePoint::new(*unit, x + dx, y + dy)) {
                    worst = worst.max(w.dist(&v) / d);
                }
            }
        }
        worst
    });
    let max_ratio = par::max_f64(&ratios);
    ContinuityReport { unit: *unit, probes: points.len(), max_ratio, bound, continuous: max_ratio <= bound }
}
