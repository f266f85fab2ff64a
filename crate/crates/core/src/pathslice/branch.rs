//! `Psi_s(z) = sqrt(2z - J)` on `C_J` with a cut from `J/2` at angle
//! `pi/4 + s pi/2`, and the slicewise glued function `Psi_phi`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{cut_angle, Phi, Ray, SliceSet};
use crate::quaternion::{embed, ImaginaryUnit, Quaternion, SlicePoint};
use crate::tolerance::TOL_RAY;
use crate::Error;

/// `Psi_s` on `C_base`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchFunction {
    pub base: ImaginaryUnit,
    pub s: f64,
}

/// Branch of `sqrt(w)` with `arg w` in `(beta - 2 pi, beta]`.
pub fn sqrt_with_cut(w: Complex64, beta: f64) -> Complex64 {
    let tau = std::f64::consts::TAU;
    let mut theta = w.arg();
    while theta > beta {
        theta -= tau;
    }
    while theta <= beta - tau {
        theta += tau;
    }
    Complex64::from_polar(w.norm().sqrt(), 0.5 * theta)
}

/// `Psi_s(x + yJ)` in `C_J` coordinates, ignoring both cuts.
pub fn psi_s_raw(s: f64, z: Complex64) -> Complex64 {
    let w = 2.0 * z - Complex64::new(0.0, 1.0);
    sqrt_with_cut(w, cut_angle(s))
}

impl BranchFunction {
    pub fn new(base: ImaginaryUnit, s: f64) -> Self {
        BranchFunction { base, s }
    }

    /// The cut `gamma_s[J]`: from `J/2` at angle `pi/4 + s pi/2`.
    pub fn cut(&self) -> Ray {
        Ray::new((0.0, 0.5), cut_angle(self.s))
    }

    /// The cut `gamma_s[-J]` seen in `C_J` coordinates (reflected below the axis).
    pub fn mirrored_cut(&self) -> Ray {
        let r = self.cut();
        Ray { apex: (0.0, -0.5), dir: (r.dir.0, -r.dir.1) }
    }

    pub fn on_cut(&self, z: Complex64) -> bool {
        let p = (z.re, z.im);
        self.cut().distance(p) <= TOL_RAY || self.mirrored_cut().distance(p) <= TOL_RAY
    }

    /// Complex value of `Psi_s` at `z` in `C_J` coordinates.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64, Error> {
        if self.on_cut(z) {
            return Err(Error::OnCut);
        }
        Ok(psi_s_raw(self.s, z))
    }

    /// The domain `C_J` minus both cuts, as a set read on `C_J`.
    pub fn domain(&self) -> SliceSet {
        SliceSet::RayComplement { base: self.base, phi: Phi::Constant { value: self.s } }
    }
}

/// `Psi_s(z)` as a quaternion of `C_J`; `z` in `C_J` coordinates.
pub fn psi_s_eval(b: &BranchFunction, z: Complex64) -> Result<Quaternion, Error> {
    let v = b.eval_complex(z)?;
    Ok(embed(&b.base, v.re, v.im))
}

/// One-sided values of `Psi_s` at `J/2 + (lambda/2) e^{theta J}`, `theta = alpha ∓ 10^-m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpSample {
    pub m: u32,
    pub before: Quaternion,
    pub after: Quaternion,
    pub jump: Quaternion,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpProbe {
    pub s: f64,
    pub lambda: f64,
    /// Cut angle `pi/4 + s pi/2`.
    pub alpha: f64,
    /// `2 sqrt(lambda) e^{alpha J / 2}`.
    pub expected: Quaternion,
    pub samples: Vec<JumpSample>,
    pub max_error: f64,
}

/// Probes the jump of `Psi_s` across its cut at distance `lambda / 2` from the apex,
/// where `|2z - J| = lambda`.
pub fn cut_jump(b: &BranchFunction, lambda: f64, ms: &[u32]) -> JumpProbe {
    let alpha = cut_angle(b.s);
    let at = |theta: f64| {
        let z = Complex64::new(0.0, 0.5) + Complex64::from_polar(0.5 * lambda, theta);
        psi_s_eval(b, z).expect("probe off the cut")
    };
    let e = Complex64::from_polar(2.0 * lambda.sqrt(), 0.5 * alpha);
    let expected = embed(&b.base, e.re, e.im);
    let samples: Vec<JumpSample> = ms
        .iter()
        .map(|&m| {
            let d = 10f64.powi(-(m as i32));
            let before = at(alpha - d);
            let after = at(alpha + d);
            let jump = before - after;
            JumpSample { m, before, after, jump, error: jump.dist(&expected) }
        })
        .collect();
    let max_error = samples.iter().map(|s| s.error).fold(0.0, f64::max);
    JumpProbe { s: b.s, lambda, alpha, expected, samples, max_error }
}

/// `Psi_phi` on `Omega_phi` (or on `Omega~_phi` with `tilde`, where the cut of
/// `-J` is restored and the value there is the continuous limit).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiPhi {
    pub base: ImaginaryUnit,
    pub phi: Phi,
    pub tilde: bool,
}

impl PsiPhi {
    pub fn new(base: ImaginaryUnit, phi: Phi) -> Self {
        PsiPhi { base, phi, tilde: false }
    }

    pub fn tilde(base: ImaginaryUnit, phi: Phi) -> Self {
        PsiPhi { base, phi, tilde: true }
    }

    pub fn domain(&self) -> SliceSet {
        if self.tilde {
            SliceSet::RayComplementTilde { base: self.base, phi: self.phi.clone() }
        } else {
            SliceSet::RayComplement { base: self.base, phi: self.phi.clone() }
        }
    }

    pub fn eval(&self, p: &SlicePoint) -> Result<Quaternion, Error> {
        psi_phi_eval(&self.phi, &self.base, p, self.tilde)
    }
}

/// `Psi_phi(x + yI) = (1 - IJ)/2 Psi_{phi(I)}(x + yJ) + (1 + IJ)/2 Psi_{phi(I)}(x - yJ)`.
pub fn psi_phi_eval(phi: &Phi, base: &ImaginaryUnit, p: &SlicePoint, tilde: bool) -> Result<Quaternion, Error> {
    let domain = if tilde {
        SliceSet::RayComplementTilde { base: *base, phi: phi.clone() }
    } else {
        SliceSet::RayComplement { base: *base, phi: phi.clone() }
    };
    if !domain.contains_point(p) {
        return Err(Error::OutOfDomain);
    }
    let s = phi.eval(base, &p.unit);
    // off the own cut of p, neither x + yJ nor x - yJ meets a cut of Psi_s in C_J,
    // except on the restored cut of -J, where the raw branch is the continuous limit
    let up = psi_s_raw(s, Complex64::new(p.x, p.y));
    let down = psi_s_raw(s, Complex64::new(p.x, -p.y));
    let ij = p.unit.as_quaternion() * base.as_quaternion();
    let a = (Quaternion::one() - ij) * 0.5;
    let b = (Quaternion::one() + ij) * 0.5;
    Ok(a * embed(base, up.re, up.im) + b * embed(base, down.re, down.im))
}
