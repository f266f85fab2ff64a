//! Piecewise-linear paths in the complex plane starting on the real axis, and
//! their lifts `gamma^I = P_I o gamma` into a slice `C_I`.

use serde::{Deserialize, Serialize};

use crate::quaternion::{embed, ImaginaryUnit, Quaternion, SlicePoint};
use crate::Error;

/// Polyline with arc-length-proportional parameter `t in [0, 1]`.
///
/// Upper paths (the default) stay in the closed upper half-plane. General paths
/// may dip below the real axis and are only accepted through [`ComplexPath::general`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ComplexPath {
    vertices: Vec<(f64, f64)>,
    /// cumulative arc length at each vertex, normalized to end at 1
    knots: Vec<f64>,
    upper: bool,
}

impl ComplexPath {
    /// Path in the closed upper half-plane with a real initial point.
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self, Error> {
        if vertices.iter().any(|v| v.1 < 0.0) {
            return Err(Error::InvalidPath("vertex below the real axis".into()));
        }
        Self::build(vertices, true)
    }

    /// Path allowed to visit the lower half-plane; still starts on the real axis.
    pub fn general(vertices: Vec<(f64, f64)>) -> Result<Self, Error> {
        let upper = vertices.iter().all(|v| v.1 >= 0.0);
        Self::build(vertices, upper)
    }

    pub fn segment(a: (f64, f64), b: (f64, f64)) -> Result<Self, Error> {
        Self::new(vec![a, b])
    }

    fn build(vertices: Vec<(f64, f64)>, upper: bool) -> Result<Self, Error> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("need at least two vertices".into()));
        }
        if vertices.iter().any(|v| !v.0.is_finite() || !v.1.is_finite()) {
            return Err(Error::InvalidPath("non-finite vertex".into()));
        }
        if vertices[0].1 != 0.0 {
            return Err(Error::InvalidPath("initial point must be real".into()));
        }
        let mut knots = Vec::with_capacity(vertices.len());
        let mut acc = 0.0;
        knots.push(0.0);
        for w in vertices.windows(2) {
            acc += ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
            knots.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::InvalidPath("zero total length".into()));
        }
        for k in &mut knots {
            *k /= acc;
        }
        Ok(ComplexPath { vertices, knots, upper })
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// Parameters at which the polyline turns.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn is_upper(&self) -> bool {
        self.upper
    }

    /// Whether `gamma(0, 1]` lies in the open upper half-plane.
    pub fn is_strict_upper(&self) -> bool {
        self.vertices[1..].iter().all(|p| p.1 > 0.0)
    }

    pub fn start(&self) -> (f64, f64) {
        self.vertices[0]
    }

    pub fn end(&self) -> (f64, f64) {
        *self.vertices.last().expect("nonempty")
    }

    pub fn point_at(&self, t: f64) -> (f64, f64) {
        let t = t.clamp(0.0, 1.0);
        let seg = match self.knots.iter().position(|&k| k >= t) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => self.knots.len() - 2,
        };
        let (t0, t1) = (self.knots[seg], self.knots[seg + 1]);
        let (a, b) = (self.vertices[seg], self.vertices[seg + 1]);
        if t1 <= t0 {
            return b;
        }
        let u = (t - t0) / (t1 - t0);
        (a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1))
    }

    /// Parameters `k/n` for `k = 0..=n`, merged with the vertex knots so that
    /// consecutive samples always lie on a common segment.
    pub fn sample_params(&self, n: usize) -> Vec<f64> {
        let n = n.max(1);
        let mut ts: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        ts.extend(self.knots.iter().copied());
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        ts
    }

    /// `(t, gamma(t))` at [`Self::sample_params`].
    pub fn samples(&self, n: usize) -> Vec<(f64, (f64, f64))> {
        self.sample_params(n).into_iter().map(|t| (t, self.point_at(t))).collect()
    }

    /// Last parameter at which the path touches the real axis (vertices and segment crossings).
    pub fn last_real_param(&self) -> f64 {
        let mut s = 0.0;
        for (i, w) in self.vertices.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let (t0, t1) = (self.knots[i], self.knots[i + 1]);
            if b.1 == 0.0 {
                s = t1;
            } else if a.1 == 0.0 {
                s = s.max(t0);
            } else if a.1.signum() != b.1.signum() {
                let u = a.1 / (a.1 - b.1);
                s = t0 + u * (t1 - t0);
            }
        }
        s
    }

    /// Sub-path on `[s, 1]` (`s` the last real parameter), reparameterized over
    /// `[0, 1]` and reflected into the upper half-plane when its end lies below
    /// the axis, with the sign `eps` such that `gamma^I(1) = delta^{eps I}(1)`.
    /// `None` when the path ends on the real axis.
    pub fn upper_reduction(&self) -> (Option<ComplexPath>, f64) {
        let end = self.end();
        let eps = if end.1 >= 0.0 { 1.0 } else { -1.0 };
        if end.1 == 0.0 {
            return (None, eps);
        }
        let s = self.last_real_param();
        let mut verts = vec![(self.point_at(s).0, 0.0)];
        for (v, &k) in self.vertices.iter().zip(&self.knots) {
            if k > s {
                verts.push((v.0, eps * v.1));
            }
        }
        (Some(ComplexPath::new(verts).expect("reduction stays in the upper half-plane")), eps)
    }

    /// `gamma^I(t)` as a quaternion.
    pub fn lift_point(&self, unit: &ImaginaryUnit, t: f64) -> Quaternion {
        let (x, y) = self.point_at(t);
        embed(unit, x, y)
    }
}

impl TryFrom<Vec<[f64; 2]>> for ComplexPath {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self, Error> {
        ComplexPath::general(v.into_iter().map(|p| (p[0], p[1])).collect())
    }
}

impl From<ComplexPath> for Vec<[f64; 2]> {
    fn from(p: ComplexPath) -> Self {
        p.vertices.into_iter().map(|(x, y)| [x, y]).collect()
    }
}

/// A path lifted to one slice, sampled.
#[derive(Clone, Debug)]
pub struct LiftedPath {
    pub unit: ImaginaryUnit,
    pub params: Vec<f64>,
    pub points: Vec<Quaternion>,
}

impl LiftedPath {
    pub fn slice_points(&self) -> impl Iterator<Item = SlicePoint> + '_ {
        self.points.iter().map(SlicePoint::from_quaternion)
    }
}

/// `gamma^I` sampled at `n` uniform parameters plus the vertex knots.
pub fn lift_path(path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> LiftedPath {
    let params = path.sample_params(n);
    let points = params.iter().map(|&t| path.lift_point(unit, t)).collect();
    LiftedPath { unit: *unit, params, points }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ComplexPath::new(vec![(0.0, 0.0)]).is_err());
        assert!(ComplexPath::new(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(ComplexPath::new(vec![(0.0, 0.0), (0.0, 0.0)]).is_err());
        assert!(ComplexPath::new(vec![(0.0, 0.0), (1.0, -1.0)]).is_err());
        assert!(ComplexPath::general(vec![(0.0, 0.0), (1.0, -1.0)]).is_ok());
    }

    #[test]
    fn arc_length_parameter() {
        let p = ComplexPath::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 3.0)]).unwrap();
        assert_eq!(p.knots(), &[0.0, 0.25, 1.0]);
        assert_eq!(p.point_at(0.25), (1.0, 0.0));
        let (x, y) = p.point_at(0.5);
        assert!((x - 1.0).abs() < 1e-15 && (y - 1.0).abs() < 1e-15);
        assert_eq!(p.point_at(1.0), (1.0, 3.0));
    }

    #[test]
    fn samples_include_knots() {
        let p = ComplexPath::new(vec![(0.0, 0.0), (0.3, 0.0), (0.3, 0.7)]).unwrap();
        let ts = p.sample_params(8);
        assert!(ts.contains(&0.3));
        assert!(ts.contains(&0.5));
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lifts() {
        let seg = ComplexPath::segment((0.0, 0.0), (0.0, 1.0)).unwrap();
        let l = lift_path(&seg, &ImaginaryUnit::j(), 4);
        assert_eq!(l.points[0], Quaternion::zero());
        assert_eq!(*l.points.last().unwrap(), Quaternion::j());

        let poly = ComplexPath::new(vec![(0.0, 0.0), (-0.2, 0.0), (-0.2, 0.8)]).unwrap();
        let u = ImaginaryUnit::normalized(1.0, 1.0, 0.0).unwrap();
        let end = poly.lift_point(&u, 1.0);
        let s = 0.8 / 2f64.sqrt();
        assert!(end.approx_eq(&Quaternion::new(-0.2, s, s, 0.0), 1e-15));
        for unit in [ImaginaryUnit::i(), ImaginaryUnit::k(), u] {
            assert_eq!(poly.lift_point(&unit, 0.0), Quaternion::zero());
        }
    }

    #[test]
    fn reduction_to_upper() {
        let g = ComplexPath::general(vec![(0.0, 0.0), (1.0, 1.0), (2.0, -1.0)]).unwrap();
        let (d, eps) = g.upper_reduction();
        let d = d.unwrap();
        assert_eq!(eps, -1.0);
        assert_eq!(d.start(), (1.5, 0.0));
        assert_eq!(d.end(), (2.0, 1.0));
        let up = ComplexPath::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let (d, eps) = up.upper_reduction();
        assert_eq!(eps, 1.0);
        assert_eq!(d.unwrap().end(), (1.0, 1.0));
        let back = ComplexPath::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert!(back.upper_reduction().0.is_none());
    }
}
