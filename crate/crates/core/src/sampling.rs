//! Seeded sampling. Every random quantity in the crate is drawn from a
//! ChaCha stream keyed by a `u64` seed, so a seed fully determines a run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quaternion::{ratio, ImaginaryUnit, Quaternion, Rational};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the unit sphere (Archimedes' projection).
pub fn random_unit(rng: &mut SeededRng) -> ImaginaryUnit {
    loop {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        if let Some(u) = ImaginaryUnit::normalized(r * phi.cos(), r * phi.sin(), z) {
            return u;
        }
    }
}

/// Pair of units with `|J - K| > min_sep`.
pub fn random_pair(rng: &mut SeededRng, min_sep: f64) -> (ImaginaryUnit, ImaginaryUnit) {
    loop {
        let j = random_unit(rng);
        let k = random_unit(rng);
        if j.distance(&k) > min_sep {
            return (j, k);
        }
    }
}

pub fn random_quaternion(rng: &mut SeededRng, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
    )
}

/// Point of the open ball of radius `r` around the origin, uniform in each coordinate box then rejected.
pub fn random_in_ball(rng: &mut SeededRng, r: f64) -> Quaternion {
    loop {
        let q = random_quaternion(rng, r);
        if q.norm() < r {
            return q;
        }
    }
}

/// Rational point of the unit sphere via inverse stereographic projection of a
/// random rational `(a, b)`: `(2a, 2b, a^2 + b^2 - 1) / (a^2 + b^2 + 1)`.
pub fn random_rational_unit(rng: &mut SeededRng) -> ImaginaryUnit<Rational> {
    let a = ratio(rng.gen_range(-40..=40), rng.gen_range(1..=17));
    let b = ratio(rng.gen_range(-40..=40), rng.gen_range(1..=17));
    let one = ratio(1, 1);
    let two = ratio(2, 1);
    let s = a.clone() * a.clone() + b.clone() * b.clone();
    let den = s.clone() + one.clone();
    ImaginaryUnit::try_new(two.clone() * a / den.clone(), two * b / den.clone(), (s - one) / den)
        .expect("stereographic image lies on the sphere")
}

pub fn random_rational_quaternion(rng: &mut SeededRng) -> Quaternion<Rational> {
    let mut c = || ratio(rng.gen_range(-50..=50), rng.gen_range(1..=9));
    Quaternion::new(c(), c(), c(), c())
}
