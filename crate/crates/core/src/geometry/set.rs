use serde::{Deserialize, Serialize};

use super::phi::{cut_angle, Phi};
use crate::quaternion::{ImaginaryUnit, Quaternion, SlicePoint};
use crate::tolerance::{TOL_RAY, TOL_UNIT};
use crate::Error;

/// σ-distance: Euclidean when `p` and `q` share a slice, otherwise
/// `sqrt(Re(q - p)^2 + (|Im q| + |Im p|)^2)`.
pub fn sigma_distance(p: &Quaternion, q: &Quaternion) -> f64 {
    if share_slice(p, q) {
        return p.dist(q);
    }
    let re = q.w - p.w;
    let s = q.im().norm() + p.im().norm();
    (re * re + s * s).sqrt()
}

/// Whether some `C_I` contains both points.
pub fn share_slice(p: &Quaternion, q: &Quaternion) -> bool {
    let (a, b) = (p.im(), q.im());
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return true;
    }
    let cross = (
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    );
    let c = (cross.0 * cross.0 + cross.1 * cross.1 + cross.2 * cross.2).sqrt();
    c <= TOL_UNIT * na * nb
}

/// `q in Sigma(p, r)`, strict.
pub fn sigma_ball_contains(p: &Quaternion, r: f64, q: &Quaternion) -> Result<bool, Error> {
    if r <= 0.0 || r.is_nan() {
        return Err(Error::NonpositiveRadius);
    }
    Ok(sigma_distance(p, q) < r)
}

/// A subset of `H` described slice by slice. Membership is evaluated lazily
/// from the analytic rule of each constructor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SliceSet {
    EuclideanBall {
        center: Quaternion,
        radius: f64,
    },
    /// Disk `B_I(c, r)` inside one plane; `center` holds `(x, y)` coordinates in `C_I`.
    SliceBall {
        unit: ImaginaryUnit,
        center: [f64; 2],
        radius: f64,
    },
    SigmaBall {
        center: Quaternion,
        radius: f64,
    },
    /// Slice sections `x^2 + y^2 / dist(J, C_I) < 1`, the unit disk on `C_I` itself.
    EllipseBook {
        unit: ImaginaryUnit,
    },
    /// `B(0, 2) ∪ B(6, 2) ∪ {q : dist(q - I, [0, 6]) < 1/2}`.
    Dumbbell {
        unit: ImaginaryUnit,
    },
    /// `H` minus one ray per slice, from `K/2` at angle `pi/4 + phi(K) pi/2`.
    RayComplement {
        base: ImaginaryUnit,
        phi: Phi,
    },
    /// [`SliceSet::RayComplement`] with the cut of `-base` restored.
    RayComplementTilde {
        base: ImaginaryUnit,
        phi: Phi,
    },
    /// Open upper half of `C_I`; contains no real point.
    HalfSlice {
        unit: ImaginaryUnit,
    },
    Complement {
        set: Box<SliceSet>,
    },
    Union {
        sets: Vec<SliceSet>,
    },
    Intersection {
        sets: Vec<SliceSet>,
    },
}

/// Ray `{apex + lambda (cos a, sin a) : lambda >= 0}` in planar coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    pub apex: (f64, f64),
    pub dir: (f64, f64),
}

impl Ray {
    pub fn new(apex: (f64, f64), angle: f64) -> Self {
        Ray { apex, dir: (angle.cos(), angle.sin()) }
    }

    pub fn distance(&self, p: (f64, f64)) -> f64 {
        let v = (p.0 - self.apex.0, p.1 - self.apex.1);
        let lambda = (v.0 * self.dir.0 + v.1 * self.dir.1).max(0.0);
        let d = (v.0 - lambda * self.dir.0, v.1 - lambda * self.dir.1);
        (d.0 * d.0 + d.1 * d.1).sqrt()
    }

    /// Smallest `u in [0, 1]` with `a + u (b - a)` within `tol` of the ray.
    pub fn first_hit(&self, a: (f64, f64), b: (f64, f64), tol: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        let mut take = |u: f64| {
            if (0.0..=1.0).contains(&u) {
                best = Some(best.map_or(u, |b: f64| b.min(u)));
            }
        };
        if self.distance(a) <= tol {
            take(0.0);
        }
        let d = (b.0 - a.0, b.1 - a.1);
        let cross = |p: (f64, f64), q: (f64, f64)| p.0 * q.1 - p.1 * q.0;
        let denom = cross(d, self.dir);
        let w = (self.apex.0 - a.0, self.apex.1 - a.1);
        if denom.abs() > 1e-300 {
            let u = cross(w, self.dir) / denom;
            let lambda = cross(w, d) / denom;
            if lambda >= -tol && (0.0..=1.0).contains(&u) {
                take(u);
            }
        }
        let len2 = d.0 * d.0 + d.1 * d.1;
        if len2 > 0.0 {
            let u = ((w.0 * d.0 + w.1 * d.1) / len2).clamp(0.0, 1.0);
            let p = (a.0 + u * d.0, a.1 + u * d.1);
            if ((p.0 - self.apex.0).powi(2) + (p.1 - self.apex.1).powi(2)).sqrt() <= tol {
                take(u);
            }
        }
        if self.distance(b) <= tol {
            take(1.0);
        }
        best
    }
}

impl SliceSet {
    /// Membership of a quaternion.
    pub fn contains(&self, q: &Quaternion) -> bool {
        self.contains_point(&SlicePoint::from_quaternion(q))
    }

    /// Membership of `x + y I` for either sign of `y`.
    pub fn contains_coords(&self, unit: &ImaginaryUnit, x: f64, y: f64) -> bool {
        self.contains_point(&SlicePoint::new(*unit, x, y))
    }

    pub fn contains_point(&self, p: &SlicePoint) -> bool {
        match self {
            SliceSet::EuclideanBall { center, radius } => p.to_quaternion().dist(center) < *radius,
            SliceSet::SliceBall { unit, center, radius } => match p.coords_in(unit, TOL_UNIT) {
                Some((x, y)) => ((x - center[0]).powi(2) + (y - center[1]).powi(2)).sqrt() < *radius,
                None => false,
            },
            SliceSet::SigmaBall { center, radius } => sigma_distance(center, &p.to_quaternion()) < *radius,
            SliceSet::EllipseBook { unit } => {
                if p.is_real {
                    return p.x * p.x < 1.0;
                }
                let d = p.unit.dist_to_slice(unit);
                if d <= TOL_UNIT {
                    p.x * p.x + p.y * p.y < 1.0
                } else {
                    p.x * p.x + p.y * p.y / d < 1.0
                }
            }
            SliceSet::Dumbbell { unit } => {
                let q = p.to_quaternion();
                if q.norm() < 2.0 || q.dist(&Quaternion::real(6.0)) < 2.0 {
                    return true;
                }
                let dx = if q.w < 0.0 { -q.w } else if q.w > 6.0 { q.w - 6.0 } else { 0.0 };
                let im = q.im() - unit.as_quaternion();
                (dx * dx + im.norm_sqr()).sqrt() < 0.5
            }
            SliceSet::RayComplement { base, phi } => !on_cut(base, phi, false, p),
            SliceSet::RayComplementTilde { base, phi } => !on_cut(base, phi, true, p),
            SliceSet::HalfSlice { unit } => !p.is_real && p.unit.approx_eq(unit, TOL_UNIT),
            SliceSet::Complement { set } => !set.contains_point(p),
            SliceSet::Union { sets } => sets.iter().any(|s| s.contains_point(p)),
            SliceSet::Intersection { sets } => sets.iter().all(|s| s.contains_point(p)),
        }
    }

    /// First parameter `u in [0, 1]` at which the segment `a -> b` of `C_unit`
    /// (planar coordinates, signed `y`) meets a measure-zero cut of the set.
    /// Only cut sets report crossings; other sets rely on point sampling.
    pub fn segment_exit(&self, unit: &ImaginaryUnit, a: (f64, f64), b: (f64, f64)) -> Option<f64> {
        match self {
            SliceSet::RayComplement { base, phi } => cut_crossing(base, phi, false, unit, a, b),
            SliceSet::RayComplementTilde { base, phi } => cut_crossing(base, phi, true, unit, a, b),
            SliceSet::Intersection { sets } => sets
                .iter()
                .filter_map(|s| s.segment_exit(unit, a, b))
                .fold(None, |acc, u| Some(acc.map_or(u, |m: f64| m.min(u)))),
            _ => None,
        }
    }

    /// Whether the set is closed under `x + yI -> x + yK` by construction.
    pub fn is_axially_symmetric(&self) -> bool {
        match self {
            SliceSet::EuclideanBall { center, .. } | SliceSet::SigmaBall { center, .. } => center.is_real(),
            SliceSet::RayComplement { phi, .. } => phi.is_constant(),
            SliceSet::Complement { set } => set.is_axially_symmetric(),
            SliceSet::Union { sets } | SliceSet::Intersection { sets } => {
                sets.iter().all(SliceSet::is_axially_symmetric)
            }
            _ => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SliceSet::EuclideanBall { .. } => "euclidean_ball",
            SliceSet::SliceBall { .. } => "slice_ball",
            SliceSet::SigmaBall { .. } => "sigma_ball",
            SliceSet::EllipseBook { .. } => "ellipse_book",
            SliceSet::Dumbbell { .. } => "dumbbell",
            SliceSet::RayComplement { .. } => "ray_complement",
            SliceSet::RayComplementTilde { .. } => "ray_complement_tilde",
            SliceSet::HalfSlice { .. } => "half_slice",
            SliceSet::Complement { .. } => "complement",
            SliceSet::Union { .. } => "union",
            SliceSet::Intersection { .. } => "intersection",
        }
    }
}

/// Whether the cut of unit `k` is present (the tilde variant restores `-base`).
fn cut_active(base: &ImaginaryUnit, restore_neg_base: bool, k: &ImaginaryUnit) -> bool {
    !(restore_neg_base && k.approx_eq(&base.neg(), TOL_UNIT))
}

/// The cut of slice `k` in `C_k` coordinates: from `(0, 1/2)` at angle `pi/4 + phi(k) pi/2`.
pub fn cut_ray(base: &ImaginaryUnit, phi: &Phi, k: &ImaginaryUnit) -> Ray {
    Ray::new((0.0, 0.5), cut_angle(phi.eval(base, k)))
}

fn on_cut(base: &ImaginaryUnit, phi: &Phi, tilde: bool, p: &SlicePoint) -> bool {
    // every cut point has positive imaginary part along its own unit, so only the
    // cut of the canonical unit can contain p
    if p.is_real || !cut_active(base, tilde, &p.unit) {
        return false;
    }
    cut_ray(base, phi, &p.unit).distance((p.x, p.y)) <= TOL_RAY
}

fn cut_crossing(
    base: &ImaginaryUnit,
    phi: &Phi,
    tilde: bool,
    unit: &ImaginaryUnit,
    a: (f64, f64),
    b: (f64, f64),
) -> Option<f64> {
    let mut best: Option<f64> = None;
    let neg = unit.neg();
    for (k, sign) in [(unit, 1.0), (&neg, -1.0)] {
        if !cut_active(base, tilde, k) {
            continue;
        }
        let r = cut_ray(base, phi, k);
        // the cut of -unit, seen in C_unit coordinates, is mirrored in y
        let ray = Ray { apex: (r.apex.0, sign * r.apex.1), dir: (r.dir.0, sign * r.dir.1) };
        if let Some(u) = ray.first_hit(a, b, TOL_RAY) {
            best = Some(best.map_or(u, |m: f64| m.min(u)));
        }
    }
    best
}
