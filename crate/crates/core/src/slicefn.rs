//! Stem functions, the pointwise representation formula in its three
//! equivalent forms, and a sampled sliceness check.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::SliceSet;
use crate::par;
use crate::quaternion::{check_pair, interp_matrix_inv, ImaginaryUnit, Quaternion, Scalar, SlicePoint};
use crate::sampling::{random_pair, random_unit, SeededRng};
use crate::tolerance::TOL_CHECK;
use crate::Error;

type StemFn = dyn Fn(f64, f64) -> (Quaternion, Quaternion) + Send + Sync;

/// Upper stem function `F = (F1, F2)` on `y >= 0`, with `f(x + yI) = F1 + I F2`.
#[derive(Clone)]
pub struct StemFunction {
    f: Arc<StemFn>,
}

impl fmt::Debug for StemFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("StemFunction")
    }
}

impl StemFunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> (Quaternion, Quaternion) + Send + Sync + 'static,
    {
        StemFunction { f: Arc::new(f) }
    }

    pub fn eval(&self, x: f64, y: f64) -> (Quaternion, Quaternion) {
        (self.f)(x, y)
    }

    /// Extension to `y < 0` with `F1` even and `F2` odd in `y`.
    pub fn eval_reflected(&self, x: f64, y: f64) -> (Quaternion, Quaternion) {
        if y >= 0.0 {
            self.eval(x, y)
        } else {
            let (a, b) = self.eval(x, -y);
            (a, -b)
        }
    }
}

/// `f(x + yI) = F1(x, y) + I F2(x, y)`; real points return `F1(x, 0)`.
pub fn eval_from_stem(stem: &StemFunction, p: &SlicePoint) -> Quaternion {
    if p.is_real {
        return stem.eval(p.x, 0.0).0;
    }
    let (a, b) = stem.eval(p.x, p.y);
    a + p.unit.as_quaternion() * b
}

/// Same as [`eval_from_stem`] for signed `y`, through the even/odd reflection.
pub fn eval_from_stem_signed(stem: &StemFunction, unit: &ImaginaryUnit, x: f64, y: f64) -> Quaternion {
    let (a, b) = stem.eval_reflected(x, y);
    a + unit.as_quaternion() * b
}

/// Stem value `[[1, J], [1, K]]^-1 (fJ, fK)^T`.
pub fn stem_from_pair<T: Scalar>(
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
    fj: &Quaternion<T>,
    fk: &Quaternion<T>,
) -> Result<(Quaternion<T>, Quaternion<T>), Error> {
    Ok(interp_matrix_inv(j, k)?.apply(fj, fk))
}

/// Coefficients `((I-K)(J-K)^-1, (I-J)(K-J)^-1)` of the two-slice formula.
pub fn repformula_coefficients<T: Scalar>(
    i: &ImaginaryUnit<T>,
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
) -> Result<(Quaternion<T>, Quaternion<T>), Error> {
    check_pair(j, k)?;
    let (iq, jq, kq) = (i.as_quaternion(), j.as_quaternion(), k.as_quaternion());
    let jk_inv = (&jq - &kq).inverse_with(0.0)?;
    let kj_inv = -jk_inv.clone();
    Ok((&(&iq - &kq) * &jk_inv, &(&iq - &jq) * &kj_inv))
}

/// `f(x+yI) = (I-K)(J-K)^-1 f(x+yJ) + (I-J)(K-J)^-1 f(x+yK)`.
pub fn repformula_point<T: Scalar>(
    i: &ImaginaryUnit<T>,
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
    fj: &Quaternion<T>,
    fk: &Quaternion<T>,
) -> Result<Quaternion<T>, Error> {
    let (a, b) = repformula_coefficients(i, j, k)?;
    // one coefficient vanishes and the other is exactly 1; skip the rounding
    if i == j {
        return Ok(fj.clone());
    }
    if i == k {
        return Ok(fk.clone());
    }
    Ok(&(&a * fj) + &(&b * fk))
}

/// `(J-K)^-1 [J fJ - K fK] + I (J-K)^-1 [fJ - fK]`.
pub fn repformula_il<T: Scalar>(
    i: &ImaginaryUnit<T>,
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
    fj: &Quaternion<T>,
    fk: &Quaternion<T>,
) -> Result<Quaternion<T>, Error> {
    check_pair(j, k)?;
    let (iq, jq, kq) = (i.as_quaternion(), j.as_quaternion(), k.as_quaternion());
    let jk_inv = (&jq - &kq).inverse_with(0.0)?;
    let first = &jk_inv * &(&(&jq * fj) - &(&kq * fk));
    let second = &iq * &(&jk_inv * &(fj - fk));
    Ok(&first + &second)
}

/// `(1, I) [[1, J], [1, K]]^-1 (fJ, fK)^T`.
pub fn repformula_mf<T: Scalar>(
    i: &ImaginaryUnit<T>,
    j: &ImaginaryUnit<T>,
    k: &ImaginaryUnit<T>,
    fj: &Quaternion<T>,
    fk: &Quaternion<T>,
) -> Result<Quaternion<T>, Error> {
    let (a, b) = stem_from_pair(j, k, fj, fk)?;
    Ok(&a + &(&i.as_quaternion() * &b))
}

/// `q -> sum q^n a_n` with right coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<Quaternion>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        Polynomial { coeffs }
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Quaternion::zero(); k + 1];
        coeffs[k] = Quaternion::one();
        Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, q: &Quaternion) -> Quaternion {
        let mut acc = Quaternion::zero();
        for a in self.coeffs.iter().rev() {
            acc = *q * acc + *a;
        }
        acc
    }

    /// Stem function `F(x, y)` of the polynomial: `(1, I)F = f` on every slice.
    pub fn stem(&self) -> StemFunction {
        let p = self.clone();
        StemFunction::new(move |x, y| {
            // z^n = u_n + v_n i is complex; q^n a = u_n a + I v_n a
            let (mut u, mut v) = (1.0, 0.0);
            let (mut f1, mut f2) = (Quaternion::zero(), Quaternion::zero());
            for a in &p.coeffs {
                f1 = f1 + *a * u;
                f2 = f2 + *a * v;
                let nu = u * x - v * y;
                v = u * y + v * x;
                u = nu;
            }
            (f1, f2)
        })
    }
}

/// A point `(x, y)` with three units at which a function is compared.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSampleTriple {
    pub x: f64,
    pub y: f64,
    pub i: ImaginaryUnit,
    pub j: ImaginaryUnit,
    pub k: ImaginaryUnit,
}

impl SliceSampleTriple {
    pub fn points(&self) -> [SlicePoint; 3] {
        [self.i, self.j, self.k].map(|u| SlicePoint::new(u, self.x, self.y))
    }
}

/// `n` triples with `(x, y)` uniform in `[-r, r] x [0, r]`, `|J - K| >= min_sep`,
/// and all three points inside the set. Gives up after `100 n` draws.
pub fn random_triples(
    rng: &mut SeededRng,
    set: &SliceSet,
    n: usize,
    r: f64,
    min_sep: f64,
) -> Vec<SliceSampleTriple> {
    use rand::Rng;
    let mut out = Vec::with_capacity(n);
    for _ in 0..100 * n.max(1) {
        if out.len() == n {
            break;
        }
        let x = rng.gen_range(-r..=r);
        let y = rng.gen_range(0.0..=r);
        let i = random_unit(rng);
        let (j, k) = random_pair(rng, min_sep);
        let t = SliceSampleTriple { x, y, i, j, k };
        if t.points().iter().all(|p| set.contains_point(p)) {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicenessViolation {
    pub index: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicenessReport {
    pub samples: usize,
    /// Triples not evaluated because a point fell outside the set.
    pub skipped: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub violations: Vec<SlicenessViolation>,
}

/// `|f(x+yI) - repformula(I, J, K, f(x+yJ), f(x+yK))|` over the samples.
pub fn sliceness_check<F>(f: F, set: &SliceSet, samples: &[SliceSampleTriple]) -> SlicenessReport
where
    F: Fn(&SlicePoint) -> Quaternion + Sync + Send,
{
    sliceness_check_with(f, set, samples, TOL_CHECK)
}

pub fn sliceness_check_with<F>(f: F, set: &SliceSet, samples: &[SliceSampleTriple], tol: f64) -> SlicenessReport
where
    F: Fn(&SlicePoint) -> Quaternion + Sync + Send,
{
    let res: Vec<Option<f64>> = par::map(samples, |t| {
        let [pi, pj, pk] = t.points();
        if ![pi, pj, pk].iter().all(|p| set.contains_point(p)) {
            return None;
        }
        let rhs = repformula_point(&t.i, &t.j, &t.k, &f(&pj), &f(&pk)).ok()?;
        Some((f(&pi) - rhs).norm())
    });
    let evaluated: Vec<f64> = res.iter().flatten().copied().collect();
    let violations = res
        .iter()
        .enumerate()
        .filter_map(|(index, r)| r.filter(|&v| v > tol || v.is_nan()).map(|residual| SlicenessViolation { index, residual }))
        .collect();
    SlicenessReport {
        samples: samples.len(),
        skipped: samples.len() - evaluated.len(),
        max_residual: par::max_f64(&evaluated),
        mean_residual: par::mean_f64(&evaluated),
        tolerance: tol,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{embed, ratio, Rational};
    use crate::sampling::{random_quaternion, rng};

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn stem_examples() {
        let id = StemFunction::new(|x, y| (Quaternion::real(x), Quaternion::real(y)));
        let u = ImaginaryUnit::normalized(1.0, -2.0, 2.0).unwrap();
        let p = SlicePoint::new(u, 0.4, 1.3);
        assert!(eval_from_stem(&id, &p).approx_eq(&embed(&u, 0.4, 1.3), 1e-15));

        let c = q(1.0, 2.0, -1.0, 0.5);
        let konst = StemFunction::new(move |_, _| (c, Quaternion::zero()));
        assert_eq!(eval_from_stem(&konst, &p), c);

        let sq = StemFunction::new(|x, y| (Quaternion::real(x * x - y * y), Quaternion::real(2.0 * x * y)));
        let z = embed(&u, 0.4, 1.3);
        assert!(eval_from_stem(&sq, &p).approx_eq(&(z * z), 1e-14));
        // reflection: x - yI = x + y(-I)
        assert!(eval_from_stem_signed(&sq, &u, 0.4, -1.3).approx_eq(&eval_from_stem(&sq, &p.on_unit(&u.neg())), 1e-14));
    }

    #[test]
    fn stem_from_pair_examples() {
        let (i, j) = (ImaginaryUnit::i(), ImaginaryUnit::j());
        let (a, b) = stem_from_pair(&i, &j, &q(1.0, 2.0, 0.0, 0.0), &q(1.0, 0.0, 2.0, 0.0)).unwrap();
        assert!(a.approx_eq(&Quaternion::real(1.0), 1e-15) && b.approx_eq(&Quaternion::real(2.0), 1e-15));
        let c = q(0.3, -1.0, 2.0, 4.0);
        let (a, b) = stem_from_pair(&i, &ImaginaryUnit::k(), &c, &c).unwrap();
        assert!(a.approx_eq(&c, 1e-15) && b.approx_eq(&Quaternion::zero(), 1e-15));
        assert!(matches!(stem_from_pair(&i, &i, &c, &c), Err(Error::DegeneratePair)));
    }

    #[test]
    fn repformula_examples() {
        let (i, j, k) = (ImaginaryUnit::i(), ImaginaryUnit::j(), ImaginaryUnit::k());
        let c = q(2.0, 1.0, 0.0, -1.0);
        assert!(repformula_point(&k, &i, &j, &c, &c).unwrap().approx_eq(&c, 1e-15));
        let fj = q(0.1, 0.2, 0.3, 0.4);
        assert_eq!(repformula_point(&i, &i, &j, &fj, &c).unwrap(), fj);
        let sq = |u: &Quaternion| *u * *u;
        let got = repformula_point(&k, &i, &j, &sq(&q(1.0, 2.0, 0.0, 0.0)), &sq(&q(1.0, 0.0, 2.0, 0.0))).unwrap();
        assert!(got.approx_eq(&sq(&q(1.0, 0.0, 0.0, 2.0)), 1e-14));
    }

    #[test]
    fn three_forms_agree() {
        let mut r = rng(21);
        for _ in 0..1000 {
            let i = random_unit(&mut r);
            let (j, k) = random_pair(&mut r, 0.1);
            let fj = random_quaternion(&mut r, 2.0);
            let fk = random_quaternion(&mut r, 2.0);
            let lf = repformula_point(&i, &j, &k, &fj, &fk).unwrap();
            let il = repformula_il(&i, &j, &k, &fj, &fk).unwrap();
            let mf = repformula_mf(&i, &j, &k, &fj, &fk).unwrap();
            assert!(lf.dist(&il) < 1e-12 && lf.dist(&mf) < 1e-12 && il.dist(&mf) < 1e-12);
            let (a, b) = repformula_coefficients(&i, &j, &k).unwrap();
            assert!((a + b).approx_eq(&Quaternion::one(), 1e-12));
        }
    }

    #[test]
    fn exact_forms_agree_on_rationals() {
        let u = |a: i64, b: i64, c: i64, d: i64| {
            ImaginaryUnit::<Rational>::try_new(ratio(a, d), ratio(b, d), ratio(c, d)).unwrap()
        };
        let (i, j, k) = (u(3, 4, 0, 5), u(0, 5, 12, 13), u(2, -1, 2, 3));
        let fj = Quaternion::new(ratio(1, 2), ratio(-3, 7), ratio(2, 1), ratio(0, 1));
        let fk = Quaternion::new(ratio(5, 3), ratio(1, 1), ratio(-1, 4), ratio(9, 2));
        let lf = repformula_point(&i, &j, &k, &fj, &fk).unwrap();
        assert_eq!(lf, repformula_il(&i, &j, &k, &fj, &fk).unwrap());
        assert_eq!(lf, repformula_mf(&i, &j, &k, &fj, &fk).unwrap());
        let (a, b) = stem_from_pair(&j, &k, &fj, &fk).unwrap();
        assert_eq!(&a + &(&j.as_quaternion() * &b), fj);
        assert_eq!(&a + &(&k.as_quaternion() * &b), fk);
    }

    #[test]
    fn polynomial_stem_matches_direct_evaluation() {
        let mut r = rng(4);
        let p = Polynomial::new((0..6).map(|_| random_quaternion(&mut r, 1.0)).collect());
        let stem = p.stem();
        for _ in 0..50 {
            let u = random_unit(&mut r);
            let pt = SlicePoint::new(u, 0.7, 0.4);
            assert!(eval_from_stem(&stem, &pt).dist(&p.eval(&pt.to_quaternion())) < 1e-13);
        }
    }

    #[test]
    fn sliceness_examples() {
        let mut r = rng(8);
        let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
        let triples = random_triples(&mut r, &ball, 500, 1.4, 0.1);
        assert_eq!(triples.len(), 500);
        let cube = sliceness_check(|p| p.to_quaternion().powi(3), &ball, &triples);
        assert!(cube.max_residual <= 1e-10 && cube.violations.is_empty());
        let konst = sliceness_check(|_| q(1.0, 2.0, 3.0, 4.0), &ball, &triples);
        assert!(konst.max_residual < 1e-14);

        // 0 on C_J minus R, 1 elsewhere: not a slice function
        let j = ImaginaryUnit::j();
        let piecewise = move |p: &SlicePoint| {
            if !p.is_real && (p.unit.approx_eq(&j, 1e-12) || p.unit.approx_eq(&j.neg(), 1e-12)) {
                Quaternion::zero()
            } else {
                Quaternion::one()
            }
        };
        let off_axis = SliceSet::Complement {
            set: Box::new(SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 0.0 }),
        };
        let triples: Vec<SliceSampleTriple> = (0..20)
            .map(|_| SliceSampleTriple { x: 0.3, y: 0.5, i: random_unit(&mut r), j, k: j.neg() })
            .collect();
        let rep = sliceness_check(piecewise, &off_axis, &triples);
        assert!((rep.max_residual - 1.0).abs() < 1e-12);
        assert_eq!(rep.violations.len(), 20);
    }

    #[test]
    fn polynomials_up_to_degree_eight_are_slice() {
        let mut r = rng(12);
        let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
        let triples = random_triples(&mut r, &ball, 200, 1.5, 0.1);
        for deg in 0..=8 {
            let p = Polynomial::new((0..=deg).map(|_| random_quaternion(&mut r, 1.0)).collect());
            let rep = sliceness_check(|pt| p.eval(&pt.to_quaternion()), &ball, &triples);
            assert!(rep.max_residual <= 1e-10, "degree {deg}: {}", rep.max_residual);
        }
    }
}
