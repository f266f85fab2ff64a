//! Quaternion algebra over a generic scalar, the slice-book coordinates of
//! `H = union of C_I`, and the 2x2 interpolation matrix used by every
//! two-slice reconstruction formula.
//!
//! Two arithmetic modes share the same code paths: `f64` for evaluation and
//! continuation, and [`Rational`] (arbitrary precision) for exact identity
//! checks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::tolerance::{TOL_SEP, TOL_UNIT, TOL_ZERO};
use crate::Error;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Scalar field for quaternion components.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + Send + Sync {
    /// `|self| <= tol` in float mode; exact zero test in rational mode.
    fn negligible(&self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    fn from_f64(v: f64) -> Self;
}

impl Scalar for f64 {
    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for BigRational {
    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
}

/// Builds an exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `w + x i + y j + z k`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Quaternion<T = f64> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: fmt::Debug> fmt::Debug for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}i, {:?}j, {:?}k)", self.w, self.x, self.y, self.z)
    }
}

impl Copy for Quaternion<f64> {}

impl<T: Scalar> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }

    pub fn re(&self) -> T {
        self.w.clone()
    }

    /// Imaginary part as a pure quaternion.
    pub fn im(&self) -> Self {
        Self::new(T::zero(), self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn norm_sqr(&self) -> T {
        self.w.clone() * self.w.clone()
            + self.x.clone() * self.x.clone()
            + self.y.clone() * self.y.clone()
            + self.z.clone() * self.z.clone()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.w.clone() * s.clone(),
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    /// Multiplicative inverse; `ZeroQuaternion` when the norm does not exceed `tol`.
    pub fn inverse_with(&self, tol: f64) -> Result<Self, Error> {
        let n2 = self.norm_sqr();
        if n2.negligible(tol * tol) {
            return Err(Error::ZeroQuaternion);
        }
        let c = self.conj();
        Ok(Self::new(
            c.w / n2.clone(),
            c.x / n2.clone(),
            c.y / n2.clone(),
            c.z / n2,
        ))
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        self.inverse_with(TOL_ZERO)
    }

    pub fn is_real(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Componentwise closeness, `max |a_c - b_c| <= tol` (exact equality in rational mode).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.w.clone() - other.w.clone()).negligible(tol)
            && (self.x.clone() - other.x.clone()).negligible(tol)
            && (self.y.clone() - other.y.clone()).negligible(tol)
            && (self.z.clone() - other.z.clone()).negligible(tol)
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(self.w.to_f64(), self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }

    /// Euclidean inner product of the imaginary parts.
    pub fn dot_im(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone()
            + self.y.clone() * other.y.clone()
            + self.z.clone() * other.z.clone()
    }
}

impl Quaternion<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Distance in the quaternion norm.
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Quaternion::one();
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Quaternion::new(
            a.w.clone() * b.w.clone()
                - a.x.clone() * b.x.clone()
                - a.y.clone() * b.y.clone()
                - a.z.clone() * b.z.clone(),
            a.w.clone() * b.x.clone() + a.x.clone() * b.w.clone() + a.y.clone() * b.z.clone()
                - a.z.clone() * b.y.clone(),
            a.w.clone() * b.y.clone() - a.x.clone() * b.z.clone()
                + a.y.clone() * b.w.clone()
                + a.z.clone() * b.x.clone(),
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl<'a, T: Scalar> Mul<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, b: &'a Quaternion<T>) -> Quaternion<T> {
        self.clone() * b.clone()
    }
}

impl<'a, T: Scalar> Add<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, b: &'a Quaternion<T>) -> Quaternion<T> {
        self.clone() + b.clone()
    }
}

impl<'a, T: Scalar> Sub<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, b: &'a Quaternion<T>) -> Quaternion<T> {
        self.clone() - b.clone()
    }
}

impl Mul<f64> for Quaternion<f64> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(&s)
    }
}

/// A point of the unit sphere of imaginary quaternions, `I^2 = -1`.
#[derive(Clone, PartialEq)]
pub struct ImaginaryUnit<T: Scalar = f64> {
    x: T,
    y: T,
    z: T,
}

impl Copy for ImaginaryUnit<f64> {}

impl<T: Scalar + fmt::Debug> fmt::Debug for ImaginaryUnit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unit({:?}i + {:?}j + {:?}k)", self.x, self.y, self.z)
    }
}

impl<T: Scalar> ImaginaryUnit<T> {
    /// Accepts components whose squared norm is 1 within `TOL_UNIT` (exactly, for rationals).
    pub fn try_new(x: T, y: T, z: T) -> Result<Self, Error> {
        let n2 = x.clone() * x.clone() + y.clone() * y.clone() + z.clone() * z.clone();
        if !(n2 - T::one()).negligible(TOL_UNIT) {
            return Err(Error::NotUnit);
        }
        Ok(ImaginaryUnit { x, y, z })
    }

    pub fn i() -> Self {
        ImaginaryUnit { x: T::one(), y: T::zero(), z: T::zero() }
    }

    pub fn j() -> Self {
        ImaginaryUnit { x: T::zero(), y: T::one(), z: T::zero() }
    }

    pub fn k() -> Self {
        ImaginaryUnit { x: T::zero(), y: T::zero(), z: T::one() }
    }

    pub fn components(&self) -> (T, T, T) {
        (self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn as_quaternion(&self) -> Quaternion<T> {
        Quaternion::new(T::zero(), self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone() + self.z.clone() * o.z.clone()
    }

    pub fn neg(&self) -> Self {
        ImaginaryUnit { x: -self.x.clone(), y: -self.y.clone(), z: -self.z.clone() }
    }
}

impl ImaginaryUnit<f64> {
    /// Normalizes `(x, y, z)`; `None` for the zero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Option<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(ImaginaryUnit { x: x / n, y: y / n, z: z / n })
    }

    pub fn from_array(a: [f64; 3]) -> Result<Self, Error> {
        Self::try_new(a[0], a[1], a[2])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `|self - other|` as quaternions.
    pub fn distance(&self, o: &Self) -> f64 {
        let (dx, dy, dz) = (self.x - o.x, self.y - o.y, self.z - o.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.distance(o) <= tol
    }

    /// Euclidean distance from this unit to the plane `C_other = span(1, other)`.
    /// Computed as the norm of the projection residual, which stays accurate near `self = ±other`.
    pub fn dist_to_slice(&self, other: &Self) -> f64 {
        let c = self.dot(other);
        let r = (self.x - c * other.x, self.y - c * other.y, self.z - c * other.z);
        (r.0 * r.0 + r.1 * r.1 + r.2 * r.2).sqrt()
    }

    /// Great-circle point `cos(theta) self + sin(theta) toward`, `toward` orthogonal to self.
    pub fn rotate_toward(&self, toward: &Self, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        ImaginaryUnit::normalized(
            c * self.x + s * toward.x,
            c * self.y + s * toward.y,
            c * self.z + s * toward.z,
        )
        .expect("rotation of orthogonal units is nonzero")
    }

    /// Deterministic unit orthogonal to `self`: Gram-Schmidt against the first of
    /// `i, j, k` that is not nearly parallel.
    pub fn orthogonal(&self) -> Self {
        for e in [Self::i(), Self::j(), Self::k()] {
            let c = self.dot(&e);
            if c.abs() < 0.9 {
                return ImaginaryUnit::normalized(e.x - c * self.x, e.y - c * self.y, e.z - c * self.z)
                    .expect("non-parallel basis vector");
            }
        }
        unreachable!("a unit vector cannot be nearly parallel to all three axes")
    }

    /// Cross product `self x o`, i.e. the imaginary part of the product `self * o`.
    pub fn cross(&self, o: &Self) -> Option<Self> {
        ImaginaryUnit::normalized(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }
}

impl From<ImaginaryUnit<f64>> for [f64; 3] {
    fn from(u: ImaginaryUnit<f64>) -> Self {
        u.to_array()
    }
}

impl Serialize for ImaginaryUnit<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ImaginaryUnit<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let a = <[f64; 3]>::deserialize(d)?;
        ImaginaryUnit::try_from(a).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<[f64; 3]> for ImaginaryUnit<f64> {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self, Error> {
        // tolerate hand-typed configs by renormalizing near-unit vectors
        let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        if (n - 1.0).abs() > 1e-6 {
            return Err(Error::NotUnit);
        }
        ImaginaryUnit::normalized(a[0], a[1], a[2]).ok_or(Error::NotUnit)
    }
}

/// Result of [`unit_of`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitOf {
    Unit(ImaginaryUnit),
    Real,
}

/// The unit `I` with `q` in `C_I`: `Im(q)/|Im(q)|`, or the real flag.
pub fn unit_of(q: &Quaternion) -> UnitOf {
    match ImaginaryUnit::normalized(q.x, q.y, q.z) {
        Some(u) => UnitOf::Unit(u),
        None => UnitOf::Real,
    }
}

/// `x + y I`.
pub fn embed<T: Scalar>(unit: &ImaginaryUnit<T>, x: T, y: T) -> Quaternion<T> {
    let (ix, iy, iz) = unit.components();
    Quaternion::new(x, y.clone() * ix, y.clone() * iy, y * iz)
}

/// Canonical slice-book coordinates `(I, x, y)` with `y >= 0`. Real points use the
/// unit `i`, which no consumer may depend on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePoint {
    pub unit: ImaginaryUnit,
    pub x: f64,
    pub y: f64,
    pub is_real: bool,
}

impl SlicePoint {
    /// Canonicalizes `x + y I` for any sign of `y`.
    pub fn new(unit: ImaginaryUnit, x: f64, y: f64) -> Self {
        if y > 0.0 {
            SlicePoint { unit, x, y, is_real: false }
        } else if y < 0.0 {
            SlicePoint { unit: unit.neg(), x, y: -y, is_real: false }
        } else {
            Self::real(x)
        }
    }

    pub fn real(x: f64) -> Self {
        SlicePoint { unit: ImaginaryUnit::i(), x, y: 0.0, is_real: true }
    }

    pub fn from_quaternion(q: &Quaternion) -> Self {
        match unit_of(q) {
            UnitOf::Real => Self::real(q.w),
            UnitOf::Unit(u) => {
                let y = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
                SlicePoint { unit: u, x: q.w, y, is_real: false }
            }
        }
    }

    pub fn to_quaternion(&self) -> Quaternion {
        if self.is_real {
            Quaternion::real(self.x)
        } else {
            embed(&self.unit, self.x, self.y)
        }
    }

    /// The point with the same coordinates on another slice, `x + y K`.
    pub fn on_unit(&self, unit: &ImaginaryUnit) -> Self {
        SlicePoint::new(*unit, self.x, self.y)
    }

    /// Coordinates of this point in the plane `C_unit` (signed `y`), if it lies there.
    pub fn coords_in(&self, unit: &ImaginaryUnit, tol: f64) -> Option<(f64, f64)> {
        if self.is_real {
            Some((self.x, 0.0))
        } else if self.unit.approx_eq(unit, tol) {
            Some((self.x, self.y))
        } else if self.unit.approx_eq(&unit.neg(), tol) {
            Some((self.x, -self.y))
        } else {
            None
        }
    }
}

/// `a = a1 + a2 J` with `a1, a2` in `C_I`; requires `I` orthogonal to `J`.
pub fn split_basis<T: Scalar>(
    a: &Quaternion<T>,
    i: &ImaginaryUnit<T>,
    j: &ImaginaryUnit<T>,
) -> Result<(Quaternion<T>, Quaternion<T>), Error> {
    if !i.dot(j).negligible(TOL_UNIT) {
        return Err(Error::NotOrthogonal);
    }
    let iq = i.as_quaternion();
    let jq = j.as_quaternion();
    let kq = &iq * &jq;
    let u = a.dot_im(&iq);
    let v = a.dot_im(&jq);
    let t = a.dot_im(&kq);
    let a1 = embed(i, a.re(), u);
    let a2 = embed(i, v, t);
    Ok((a1, a2))
}

/// 2x2 quaternion matrix `[[m11, m12], [m21, m22]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpMatrix<T: Scalar = f64> {
    pub m11: Quaternion<T>,
    pub m12: Quaternion<T>,
    pub m21: Quaternion<T>,
    pub m22: Quaternion<T>,
}

impl<T: Scalar> InterpMatrix<T> {
    /// `[[1, J], [1, K]]`.
    pub fn vandermonde(j: &ImaginaryUnit<T>, k: &ImaginaryUnit<T>) -> Self {
        InterpMatrix {
            m11: Quaternion::one(),
            m12: j.as_quaternion(),
            m21: Quaternion::one(),
            m22: k.as_quaternion(),
        }
    }

    pub fn identity() -> Self {
        InterpMatrix {
            m11: Quaternion::one(),
            m12: Quaternion::zero(),
            m21: Quaternion::zero(),
            m22: Quaternion::one(),
        }
    }

    /// Matrix product `self * rhs` (quaternion entries, order preserved).
    pub fn matmul(&self, rhs: &Self) -> Self {
        InterpMatrix {
            m11: &self.m11 * &rhs.m11 + &self.m12 * &rhs.m21,
            m12: &self.m11 * &rhs.m12 + &self.m12 * &rhs.m22,
            m21: &self.m21 * &rhs.m11 + &self.m22 * &rhs.m21,
            m22: &self.m21 * &rhs.m12 + &self.m22 * &rhs.m22,
        }
    }

    /// `self * (a, b)^T`.
    pub fn apply(&self, a: &Quaternion<T>, b: &Quaternion<T>) -> (Quaternion<T>, Quaternion<T>) {
        (&self.m11 * a + &self.m12 * b, &self.m21 * a + &self.m22 * b)
    }

    /// Largest componentwise deviation from another matrix, as `f64`.
    pub fn max_deviation(&self, o: &Self) -> f64 {
        [(&self.m11, &o.m11), (&self.m12, &o.m12), (&self.m21, &o.m21), (&self.m22, &o.m22)]
            .iter()
            .map(|(a, b)| (*a - *b).to_f64().norm())
            .fold(0.0, f64::max)
    }
}

/// Inverse of `[[1, J], [1, K]]`:
/// `[[(J-K)^-1 J, (K-J)^-1 K], [(J-K)^-1, (K-J)^-1]]`.
pub fn interp_matrix_inv<T: Scalar>(
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
) -> Result<InterpMatrix<T>, Error> {
    interp_matrix_inv_with(j, k, TOL_SEP)
}

pub fn interp_matrix_inv_with<T: Scalar>(
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
    tol_sep: f64,
) -> Result<InterpMatrix<T>, Error> {
    let jq = j.as_quaternion();
    let kq = k.as_quaternion();
    let jk = &jq - &kq;
    if jk.norm_sqr().negligible(tol_sep * tol_sep) {
        return Err(Error::DegeneratePair);
    }
    let jk_inv = jk.inverse_with(0.0)?;
    let kj_inv = -jk_inv.clone();
    Ok(InterpMatrix {
        m11: &jk_inv * &jq,
        m12: &kj_inv * &kq,
        m21: jk_inv,
        m22: kj_inv,
    })
}

/// Checks `|I - J|` against the separation tolerance.
pub fn check_pair<T: Scalar>(j: &ImaginaryUnit<T>, k: &ImaginaryUnit<T>) -> Result<(), Error> {
    let d = &j.as_quaternion() - &k.as_quaternion();
    if d.norm_sqr().negligible(TOL_SEP * TOL_SEP) {
        Err(Error::DegeneratePair)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn defining_relations() {
        let (i, j, k) = (Quaternion::<f64>::i(), Quaternion::j(), Quaternion::k());
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, Quaternion::real(-1.0));
        assert_eq!(i * j * k, Quaternion::real(-1.0));
        let a = q(2.0, -3.0, 0.0, 1.0);
        assert_eq!(a * Quaternion::one(), a);
        assert_eq!(Quaternion::one() * a, a);
    }

    #[test]
    fn product_matches_hand_expansion() {
        // (2 + 3i)(1 + j) = 2 + 2j + 3i + 3ij = 2 + 3i + 2j + 3k
        assert_eq!(q(2.0, 3.0, 0.0, 0.0) * q(1.0, 0.0, 1.0, 0.0), q(2.0, 3.0, 2.0, 3.0));
    }

    #[test]
    fn inverses() {
        assert_eq!(Quaternion::<f64>::one().inverse().unwrap(), Quaternion::one());
        assert_eq!(Quaternion::<f64>::i().inverse().unwrap(), -Quaternion::i());
        let inv = q(1.0, 1.0, 1.0, 1.0).inverse().unwrap();
        assert!(inv.approx_eq(&q(0.25, -0.25, -0.25, -0.25), 1e-15));
        assert!((q(1.0, 1.0, 1.0, 1.0) * inv).approx_eq(&Quaternion::one(), 1e-12));
        assert!(matches!(Quaternion::<f64>::zero().inverse(), Err(Error::ZeroQuaternion)));
        assert!(matches!(q(1e-15, 0.0, 0.0, 0.0).inverse(), Err(Error::ZeroQuaternion)));
        let r = Quaternion::new(ratio(1, 1), ratio(1, 1), ratio(1, 1), ratio(1, 1));
        assert_eq!(r.inverse().unwrap(), Quaternion::new(ratio(1, 4), ratio(-1, 4), ratio(-1, 4), ratio(-1, 4)));
    }

    #[test]
    fn unit_extraction() {
        assert_eq!(unit_of(&q(3.0, 4.0, 0.0, 0.0)), UnitOf::Unit(ImaginaryUnit::i()));
        assert_eq!(unit_of(&q(5.0, 0.0, 0.0, 0.0)), UnitOf::Real);
        let UnitOf::Unit(u) = unit_of(&q(1.0, 1.0, 1.0, 0.0)) else { panic!() };
        let s = 0.5f64.sqrt();
        assert!(u.approx_eq(&ImaginaryUnit::try_new(s, s, 0.0).unwrap(), 1e-15));
    }

    #[test]
    fn embedding() {
        assert_eq!(embed(&ImaginaryUnit::j(), 1.0, 2.0), q(1.0, 0.0, 2.0, 0.0));
        assert_eq!(embed(&ImaginaryUnit::i(), 3.0, 0.0), Quaternion::real(3.0));
        let u = ImaginaryUnit::normalized(1.0, 1.0, 0.0).unwrap();
        assert!(embed(&u, 0.0, 2f64.sqrt()).approx_eq(&q(0.0, 1.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn slice_point_canonical_form() {
        let p = SlicePoint::new(ImaginaryUnit::i(), 1.0, -2.0);
        assert_eq!(p.unit, ImaginaryUnit::<f64>::i().neg());
        assert_eq!(p.y, 2.0);
        let r = SlicePoint::new(ImaginaryUnit::k(), 4.0, 0.0);
        assert!(r.is_real);
        assert_eq!(r.unit, ImaginaryUnit::i());
        assert_eq!(SlicePoint::from_quaternion(&q(1.0, 0.0, 0.0, -3.0)).unit, ImaginaryUnit::<f64>::k().neg());
    }

    #[test]
    fn split_examples() {
        let (a1, a2) = split_basis(&q(1.0, 2.0, 3.0, 4.0), &ImaginaryUnit::i(), &ImaginaryUnit::j()).unwrap();
        assert_eq!(a1, q(1.0, 2.0, 0.0, 0.0));
        assert_eq!(a2, q(3.0, 4.0, 0.0, 0.0));
        let (r1, r2) = split_basis(&Quaternion::real(7.0), &ImaginaryUnit::k(), &ImaginaryUnit::i()).unwrap();
        assert_eq!((r1, r2), (Quaternion::real(7.0), Quaternion::zero()));
        let (z1, z2) = split_basis(&Quaternion::<f64>::j(), &ImaginaryUnit::i(), &ImaginaryUnit::j()).unwrap();
        assert_eq!((z1, z2), (Quaternion::zero(), Quaternion::one()));
        let bad = ImaginaryUnit::normalized(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            split_basis(&Quaternion::one(), &ImaginaryUnit::i(), &bad),
            Err(Error::NotOrthogonal)
        ));
    }

    #[test]
    fn interp_inverse_examples() {
        let i = ImaginaryUnit::<f64>::i();
        let m = interp_matrix_inv(&i, &i.neg()).unwrap();
        assert!(m.m11.approx_eq(&Quaternion::real(0.5), 1e-15));
        assert!(m.m12.approx_eq(&Quaternion::real(0.5), 1e-15));
        assert!(m.m21.approx_eq(&q(0.0, -0.5, 0.0, 0.0), 1e-15));
        assert!(m.m22.approx_eq(&q(0.0, 0.5, 0.0, 0.0), 1e-15));

        let m = interp_matrix_inv(&i, &ImaginaryUnit::j()).unwrap();
        assert!(m.m11.approx_eq(&q(0.5, 0.0, 0.0, -0.5), 1e-15));
        assert!(m.m12.approx_eq(&q(0.5, 0.0, 0.0, 0.5), 1e-15));
        assert!(m.m21.approx_eq(&q(0.0, -0.5, 0.5, 0.0), 1e-15));
        assert!(m.m22.approx_eq(&q(0.0, 0.5, -0.5, 0.0), 1e-15));

        assert!(matches!(interp_matrix_inv(&i, &i), Err(Error::DegeneratePair)));
    }

    #[test]
    fn rational_units_are_exact() {
        // (3/5, 4/5, 0) and (0, 5/13, 12/13)
        let j = ImaginaryUnit::try_new(ratio(3, 5), ratio(4, 5), ratio(0, 1)).unwrap();
        let k = ImaginaryUnit::try_new(ratio(0, 1), ratio(5, 13), ratio(12, 13)).unwrap();
        let m = interp_matrix_inv(&j, &k).unwrap();
        let prod = m.matmul(&InterpMatrix::vandermonde(&j, &k));
        assert_eq!(prod, InterpMatrix::identity());
        assert!(ImaginaryUnit::try_new(ratio(1, 2), ratio(1, 2), ratio(0, 1)).is_err());
    }

    #[test]
    fn orthogonal_helper() {
        for u in [ImaginaryUnit::i(), ImaginaryUnit::j(), ImaginaryUnit::normalized(1.0, 2.0, -3.0).unwrap()] {
            let o = u.orthogonal();
            assert!(u.dot(&o).abs() < 1e-15);
            assert!((o.dot(&o) - 1.0).abs() < 1e-15);
        }
    }
}
