//! σ-distance, slice-set descriptors and sampled topology probes.

pub mod phi;
pub mod set;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use phi::{cut_angle, Phi, PhiEntry};
pub use set::{cut_ray, share_slice, sigma_ball_contains, sigma_distance, Ray, SliceSet};

use crate::par;
use crate::path::ComplexPath;
use crate::quaternion::{embed, ImaginaryUnit, Quaternion, SlicePoint};
use crate::sampling::{random_quaternion, random_unit, rng};
use crate::tolerance::TOL_UNIT;
use crate::Error;

/// `set_contains(S, q)`.
pub fn set_contains(set: &SliceSet, q: &Quaternion) -> bool {
    set.contains(q)
}

const BISECTION_STEPS: usize = 60;
const RINGS: usize = 4;

/// Largest `rho <= r_max` (by bisection) such that every probe point at
/// distance `rho` lies in the set. `ring(rho)` yields the probe points.
fn bisect_radius<F>(set: &SliceSet, r_max: f64, ring: F) -> f64
where
    F: Fn(f64) -> Vec<Quaternion> + Sync,
{
    // interior rings guard against sets that are not star-shaped about the center
    let ok = |rho: f64| {
        (1..=RINGS).all(|m| {
            let pts = ring(rho * m as f64 / RINGS as f64);
            par::map(&pts, |p| set.contains(p)).into_iter().all(|b| b)
        })
    };
    if ok(r_max) {
        return r_max;
    }
    let (mut lo, mut hi) = (0.0, r_max);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Estimate of the largest disk `B_I(q, rho)`, `rho <= r_max`, inside the slice section `S_I`.
pub fn slice_inradius(
    set: &SliceSet,
    q: &Quaternion,
    unit: &ImaginaryUnit,
    r_max: f64,
    n_probe: usize,
) -> Result<f64, Error> {
    if !set.contains(q) {
        return Err(Error::NotInSet);
    }
    let (cx, cy) = SlicePoint::from_quaternion(q).coords_in(unit, TOL_UNIT).ok_or(Error::NotOnSlice)?;
    let n = n_probe.max(4);
    Ok(bisect_radius(set, r_max, |rho| {
        (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                embed(unit, cx + rho * a.cos(), cy + rho * a.sin())
            })
            .collect()
    }))
}

/// Fixed probe directions in `R^4`: the eight axis directions plus seeded random ones.
fn sphere_directions(n: usize) -> Vec<Quaternion> {
    let mut dirs = Vec::with_capacity(n + 8);
    for a in 0..4 {
        for s in [1.0, -1.0] {
            let mut c = [0.0; 4];
            c[a] = s;
            dirs.push(Quaternion::from_array(c));
        }
    }
    let mut r = rng(0x5eed);
    while dirs.len() < n + 8 {
        let q = random_quaternion(&mut r, 1.0);
        let n = q.norm();
        if n > 1e-3 {
            dirs.push(q * (1.0 / n));
        }
    }
    dirs
}

/// Estimate of the largest Euclidean ball `B(q, rho)` inside the set. Probe
/// directions cover the plane `C_I` of `q` densely and the rest of `R^4` sparsely,
/// so the estimate is an upper bound.
pub fn euclidean_inradius(set: &SliceSet, q: &Quaternion, r_max: f64, n_probe: usize) -> Result<f64, Error> {
    if !set.contains(q) {
        return Err(Error::NotInSet);
    }
    let own = SlicePoint::from_quaternion(q).unit;
    let n = n_probe.max(4);
    let mut dirs = sphere_directions(n_probe);
    dirs.extend((0..n).map(|k| {
        let a = std::f64::consts::TAU * k as f64 / n as f64;
        embed(&own, a.cos(), a.sin())
    }));
    Ok(bisect_radius(set, r_max, |rho| dirs.iter().map(|d| *q + *d * rho).collect()))
}

/// Estimate of the largest σ-ball `Sigma(q, rho)` inside the set. The σ-sphere is
/// probed on the slice of `q` and on `n_probe` other slices.
pub fn sigma_inradius(set: &SliceSet, q: &Quaternion, r_max: f64, n_probe: usize) -> Result<f64, Error> {
    if !set.contains(q) {
        return Err(Error::NotInSet);
    }
    let p = SlicePoint::from_quaternion(q);
    let a = if p.is_real { 0.0 } else { p.y };
    let own = p.unit;
    let mut r = rng(0x51a);
    let others: Vec<ImaginaryUnit> = (0..n_probe).map(|_| random_unit(&mut r)).collect();
    let n = n_probe.max(4);
    Ok(bisect_radius(set, r_max, |rho| {
        let mut pts: Vec<Quaternion> = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                embed(&own, p.x + rho * t.cos(), a + rho * t.sin())
            })
            .collect();
        if rho > a {
            for k in &others {
                for frac in [0.0, 0.5, 1.0] {
                    let h = a + (rho - a) * frac;
                    let re = (rho * rho - h * h).max(0.0).sqrt();
                    let t = h - a;
                    pts.push(embed(k, p.x + re, t));
                    pts.push(embed(k, p.x - re, t));
                }
            }
        }
        pts
    }))
}

/// Default real grid for connectedness probes: `[-10, 10]` with step `0.01`.
pub fn default_real_grid() -> Vec<f64> {
    (0..=2000).map(|k| -10.0 + 0.01 * k as f64).collect()
}

/// Number of maximal runs of members along the sorted grid.
pub fn real_member_runs(set: &SliceSet, x_grid: &[f64]) -> usize {
    let member = par::map(x_grid, |&x| set.contains(&Quaternion::real(x)));
    let mut runs = 0;
    let mut prev = false;
    for m in member {
        if m && !prev {
            runs += 1;
        }
        prev = m;
    }
    runs
}

/// At most one run of real members on the grid (vacuously true with none).
pub fn is_real_connected_sampled(set: &SliceSet, x_grid: &[f64]) -> bool {
    real_member_runs(set, x_grid) <= 1
}

/// Sampled containment of a lifted path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathContainment {
    pub contained: bool,
    /// Smallest parameter at which the lift leaves the set.
    pub exit_t: Option<f64>,
    pub samples: usize,
}

/// Checks `gamma^I` at `n` uniform parameters plus the vertex knots, and each
/// segment between consecutive samples against the set's cuts.
pub fn path_in_set(set: &SliceSet, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> PathContainment {
    let ts = path.sample_params(n);
    let pts: Vec<(f64, f64)> = ts.iter().map(|&t| path.point_at(t)).collect();
    let member = par::map(&pts, |&(x, y)| set.contains_coords(unit, x, y));
    for i in 0..ts.len() {
        if !member[i] {
            return PathContainment { contained: false, exit_t: Some(ts[i]), samples: ts.len() };
        }
        if i + 1 < ts.len() {
            if let Some(u) = set.segment_exit(unit, pts[i], pts[i + 1]) {
                let t = ts[i] + u * (ts[i + 1] - ts[i]);
                return PathContainment { contained: false, exit_t: Some(t), samples: ts.len() };
            }
        }
    }
    PathContainment { contained: true, exit_t: None, samples: ts.len() }
}

/// One probed point of a [`TopologyReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyProbe {
    pub point: [f64; 4],
    pub unit: [f64; 3],
    pub slice_inradius: f64,
    pub euclidean_inradius: f64,
    pub sigma_inradius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub probes: Vec<TopologyProbe>,
    pub n_probe: usize,
    pub tolerance: f64,
    /// slice inradius >= σ inradius - tolerance at every probe
    pub slice_dominates_sigma: bool,
    /// σ inradius >= Euclidean inradius - tolerance at every probe
    pub sigma_dominates_euclidean: bool,
}

/// Inradius estimates in the three topologies at each `(point, slice)` pair.
/// Points outside the set are skipped.
pub fn probe_topology(
    set: &SliceSet,
    points: &[(Quaternion, ImaginaryUnit)],
    r_max: f64,
    n_probe: usize,
    tolerance: f64,
) -> TopologyReport {
    let probes: Vec<TopologyProbe> = points
        .iter()
        .filter_map(|(q, u)| {
            let s = slice_inradius(set, q, u, r_max, n_probe).ok()?;
            let e = euclidean_inradius(set, q, r_max, n_probe).ok()?;
            let g = sigma_inradius(set, q, r_max, n_probe).ok()?;
            Some(TopologyProbe {
                point: q.to_array(),
                unit: u.to_array(),
                slice_inradius: s,
                euclidean_inradius: e,
                sigma_inradius: g,
            })
        })
        .collect();
    let slice_dominates_sigma = probes.iter().all(|p| p.slice_inradius >= p.sigma_inradius - tolerance);
    let sigma_dominates_euclidean = probes.iter().all(|p| p.sigma_inradius >= p.euclidean_inradius - tolerance);
    TopologyReport { probes, n_probe, tolerance, slice_dominates_sigma, sigma_dominates_euclidean }
}

/// Raster of slice sections: for each unit, an `nx x ny` grid over the box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub units: Vec<ImaginaryUnit>,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

fn axis(range: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![range[0]];
    }
    (0..n).map(|k| range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64).collect()
}

/// Membership rows `(unit, x, y, member)` in unit-major, then x, then y order.
pub fn membership_grid(set: &SliceSet, spec: &GridSpec) -> Vec<(ImaginaryUnit, f64, f64, bool)> {
    let xs = axis(spec.x_range, spec.nx);
    let ys = axis(spec.y_range, spec.ny);
    let mut cells = Vec::with_capacity(spec.units.len() * xs.len() * ys.len());
    for u in &spec.units {
        for &x in &xs {
            for &y in &ys {
                cells.push((*u, x, y));
            }
        }
    }
    let member = par::map(&cells, |(u, x, y)| set.contains_coords(u, *x, *y));
    cells.into_iter().zip(member).map(|((u, x, y), m)| (u, x, y, m)).collect()
}

pub const GRID_CSV_HEADER: &str = "unit_x,unit_y,unit_z,x,y,member";

pub fn write_grid_csv<W: Write>(rows: &[(ImaginaryUnit, f64, f64, bool)], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{GRID_CSV_HEADER}")?;
    for (u, x, y, m) in rows {
        let [a, b, c] = u.to_array();
        writeln!(out, "{a},{b},{c},{x},{y},{}", u8::from(*m))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_unit;

    #[test]
    fn inradius_examples() {
        let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
        for u in [ImaginaryUnit::i(), ImaginaryUnit::normalized(1.0, 2.0, 3.0).unwrap()] {
            let r = slice_inradius(&ball, &Quaternion::zero(), &u, 5.0, 64).unwrap();
            assert!((r - 2.0).abs() < 1e-3);
        }
        let far = Quaternion::real(3.0);
        assert!(matches!(slice_inradius(&ball, &far, &ImaginaryUnit::i(), 1.0, 64), Err(Error::NotInSet)));
        let off = Quaternion::new(0.0, 0.0, 0.5, 0.0);
        assert!(matches!(slice_inradius(&ball, &off, &ImaginaryUnit::i(), 1.0, 64), Err(Error::NotOnSlice)));
    }

    #[test]
    fn ellipse_book_inradius_vanishes_toward_base_slice() {
        let i = ImaginaryUnit::i();
        let set = SliceSet::EllipseBook { unit: i };
        let o = i.orthogonal();
        let mut prev = f64::INFINITY;
        for n in 1..=8 {
            let theta = 0.5f64.powi(n);
            let j = i.rotate_toward(&o, theta);
            let d = j.dist_to_slice(&i);
            let r = slice_inradius(&set, &Quaternion::zero(), &j, 1.0, 64).unwrap();
            assert!((r - d.sqrt().min(1.0)).abs() < 1e-3, "n={n} r={r} d={d}");
            assert!(r <= prev);
            prev = r;
        }
    }

    #[test]
    fn real_connectedness() {
        let grid: Vec<f64> = (0..=600).map(|k| -3.0 + 0.01 * k as f64).collect();
        let sb = SliceSet::SigmaBall { center: Quaternion::i(), radius: 2.0 };
        assert!(is_real_connected_sampled(&sb, &grid));
        let db = SliceSet::Dumbbell { unit: ImaginaryUnit::i() };
        assert_eq!(real_member_runs(&db, &default_real_grid()), 2);
        assert!(!is_real_connected_sampled(&db, &default_real_grid()));
        assert!(is_real_connected_sampled(&SliceSet::HalfSlice { unit: ImaginaryUnit::j() }, &grid));
    }

    #[test]
    fn dumbbell_orthogonal_sections_are_two_disks() {
        let db = SliceSet::Dumbbell { unit: ImaginaryUnit::i() };
        for j in [ImaginaryUnit::j(), ImaginaryUnit::k(), ImaginaryUnit::normalized(0.0, 1.0, 1.0).unwrap()] {
            for a in 0..=90 {
                for b in -30..=30 {
                    // offsets keep the samples off the disk boundaries
                    let (x, y) = (-3.013 + 0.12 * a as f64, 0.1 * b as f64 + 0.007);
                    let expect = (x * x + y * y).sqrt() < 2.0 || ((x - 6.0).powi(2) + y * y).sqrt() < 2.0;
                    assert_eq!(db.contains_coords(&j, x, y), expect, "{x} {y}");
                }
            }
        }
    }

    #[test]
    fn path_containment_examples() {
        let half_i = ComplexPath::segment((0.0, 0.0), (0.0, 0.5)).unwrap();
        let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
        assert!(path_in_set(&ball, &half_i, &ImaginaryUnit::k(), 1024).contained);

        let j = ImaginaryUnit::j();
        let rc = SliceSet::RayComplement { base: j, phi: Phi::Constant { value: 0.0 } };
        let to_i = ComplexPath::segment((0.0, 0.0), (0.0, 1.0)).unwrap();
        let c = path_in_set(&rc, &to_i, &j, 1024);
        assert!(!c.contained);
        assert!((c.exit_t.unwrap() - 0.5).abs() < 1e-6);

        let sb = SliceSet::SigmaBall { center: Quaternion::i(), radius: 1.0 };
        let c = path_in_set(&sb, &half_i, &ImaginaryUnit::i(), 1024);
        assert_eq!(c.exit_t, Some(0.0));
    }

    #[test]
    fn crossing_between_samples_is_detected() {
        // a horizontal sweep at height 1 passes the 45 degree cut at x = 0.5
        // between two coarse samples
        let j = ImaginaryUnit::j();
        let rc = SliceSet::RayComplement { base: j, phi: Phi::Constant { value: 0.0 } };
        let p = ComplexPath::new(vec![(-1.0, 0.0), (-1.0, 1.0), (3.0, 1.0)]).unwrap();
        let c = path_in_set(&rc, &p, &j, 3);
        let t = c.exit_t.unwrap();
        assert!((p.point_at(t).0 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn topology_chain() {
        let mut r = rng(3);
        let ball = SliceSet::EuclideanBall { center: Quaternion::real(0.2), radius: 1.5 };
        let pts: Vec<(Quaternion, ImaginaryUnit)> = (0..6)
            .map(|_| {
                let u = random_unit(&mut r);
                (embed(&u, 0.3, 0.2), u)
            })
            .collect();
        let rep = probe_topology(&ball, &pts, 3.0, 64, 1e-3);
        assert_eq!(rep.probes.len(), 6);
        assert!(rep.slice_dominates_sigma && rep.sigma_dominates_euclidean, "{rep:?}");
        for p in &rep.probes {
            assert!(p.slice_inradius >= p.euclidean_inradius - 1e-3);
        }
    }

    #[test]
    fn sigma_ball_with_real_center_is_euclidean() {
        let mut r = rng(11);
        let c = Quaternion::real(0.7);
        let sb = SliceSet::SigmaBall { center: c, radius: 1.3 };
        let eb = SliceSet::EuclideanBall { center: c, radius: 1.3 };
        for _ in 0..10_000 {
            let q = random_quaternion(&mut r, 2.0);
            assert_eq!(sb.contains(&q), eb.contains(&q));
        }
    }

    #[test]
    fn real_membership_ignores_unit() {
        let mut r = rng(5);
        let sets = [
            SliceSet::EllipseBook { unit: ImaginaryUnit::i() },
            SliceSet::Dumbbell { unit: ImaginaryUnit::i() },
            SliceSet::RayComplement { base: ImaginaryUnit::j(), phi: Phi::HalfDistance },
            SliceSet::SigmaBall { center: Quaternion::i(), radius: 2.0 },
        ];
        for _ in 0..50 {
            let u = random_unit(&mut r);
            for s in &sets {
                for x in [-2.5, -0.3, 0.0, 1.0, 5.0] {
                    assert_eq!(s.contains_coords(&u, x, 0.0), s.contains(&Quaternion::real(x)));
                }
            }
        }
    }

    #[test]
    fn grid_csv() {
        let spec = GridSpec {
            units: vec![ImaginaryUnit::i(), ImaginaryUnit::j()],
            x_range: [-1.0, 1.0],
            y_range: [0.0, 1.0],
            nx: 3,
            ny: 2,
        };
        let rows = membership_grid(&SliceSet::EllipseBook { unit: ImaginaryUnit::i() }, &spec);
        assert_eq!(rows.len(), 12);
        let mut buf = Vec::new();
        write_grid_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("unit_x,unit_y,unit_z,x,y,member\n1,0,0,-1,0,0\n"));
        assert_eq!(text.lines().count(), 13);
    }
}
