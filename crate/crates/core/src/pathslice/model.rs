//! Functions with a domain, as consumed by the path formula and the
//! consistency checks.

use std::fmt;
use std::sync::Arc;

use crate::extension::{extend_point_eval, ExtendedFunction};
use crate::geometry::{path_in_set, PathContainment, SliceSet};
use crate::path::ComplexPath;
use crate::pathslice::branch::PsiPhi;
use crate::quaternion::{ImaginaryUnit, Quaternion, SlicePoint};
use crate::slicefn::Polynomial;
use crate::Error;

pub trait SliceModel: Send + Sync {
    fn name(&self) -> String;
    fn contains(&self, p: &SlicePoint) -> bool;
    fn eval(&self, p: &SlicePoint) -> Result<Quaternion, Error>;

    /// Containment of `gamma^I` in the domain.
    fn lift_containment(&self, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> PathContainment {
        sampled_containment(|p| self.contains(p), path, unit, n)
    }
}

/// Point-sampled containment, for domains without analytic cut crossings.
pub fn sampled_containment<F>(contains: F, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> PathContainment
where
    F: Fn(&SlicePoint) -> bool,
{
    let ts = path.sample_params(n);
    let exit_t = ts.iter().copied().find(|&t| {
        let (x, y) = path.point_at(t);
        !contains(&SlicePoint::new(*unit, x, y))
    });
    PathContainment { contained: exit_t.is_none(), exit_t, samples: ts.len() }
}

/// `sum q^n a_n` restricted to a set.
#[derive(Clone, Debug)]
pub struct PolynomialModel {
    pub poly: Polynomial,
    pub domain: SliceSet,
}

impl SliceModel for PolynomialModel {
    fn name(&self) -> String {
        format!("polynomial(degree {})", self.poly.degree())
    }
    fn contains(&self, p: &SlicePoint) -> bool {
        self.domain.contains_point(p)
    }
    fn eval(&self, p: &SlicePoint) -> Result<Quaternion, Error> {
        if !self.contains(p) {
            return Err(Error::OutOfDomain);
        }
        Ok(self.poly.eval(&p.to_quaternion()))
    }
    fn lift_containment(&self, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> PathContainment {
        path_in_set(&self.domain, path, unit, n)
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionModel {
    pub ext: ExtendedFunction,
}

impl SliceModel for ExtensionModel {
    fn name(&self) -> String {
        "two-slice extension".into()
    }
    fn contains(&self, p: &SlicePoint) -> bool {
        self.ext.part(p).is_some()
    }
    fn eval(&self, p: &SlicePoint) -> Result<Quaternion, Error> {
        extend_point_eval(&self.ext, p)
    }
}

impl SliceModel for PsiPhi {
    fn name(&self) -> String {
        if self.tilde { "psi_phi_tilde".into() } else { "psi_phi".into() }
    }
    fn contains(&self, p: &SlicePoint) -> bool {
        self.domain().contains_point(p)
    }
    fn eval(&self, p: &SlicePoint) -> Result<Quaternion, Error> {
        PsiPhi::eval(self, p)
    }
    fn lift_containment(&self, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> PathContainment {
        path_in_set(&self.domain(), path, unit, n)
    }
}

type PointFn = dyn Fn(&SlicePoint) -> Quaternion + Send + Sync;

/// An arbitrary function on a set, for checks that need non-slice inputs.
#[derive(Clone)]
pub struct FnModel {
    pub label: String,
    pub domain: SliceSet,
    f: Arc<PointFn>,
}

impl fmt::Debug for FnModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnModel").field("label", &self.label).finish()
    }
}

impl FnModel {
    pub fn new<F>(label: &str, domain: SliceSet, f: F) -> Self
    where
        F: Fn(&SlicePoint) -> Quaternion + Send + Sync + 'static,
    {
        FnModel { label: label.into(), domain, f: Arc::new(f) }
    }
}

impl SliceModel for FnModel {
    fn name(&self) -> String {
        self.label.clone()
    }
    fn contains(&self, p: &SlicePoint) -> bool {
        self.domain.contains_point(p)
    }
    fn eval(&self, p: &SlicePoint) -> Result<Quaternion, Error> {
        if !self.contains(p) {
            return Err(Error::OutOfDomain);
        }
        Ok((self.f)(p))
    }
    fn lift_containment(&self, path: &ComplexPath, unit: &ImaginaryUnit, n: usize) -> PathContainment {
        path_in_set(&self.domain, path, unit, n)
    }
}
