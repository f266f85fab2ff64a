//! JSON run configuration. Every field is optional at parse time; each
//! command checks for the inputs it needs and reports a [`Error::ConfigParse`]
//! naming the missing field.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::extension::{sigma_ball_extension, ExtendedFunction, HolomorphicSliceData};
use crate::geometry::{GridSpec, Phi, SliceSet};
use crate::path::ComplexPath;
use crate::pathslice::{ExtensionModel, PolynomialModel, PsiPhi, SliceModel};
use crate::quaternion::{embed, ImaginaryUnit, Quaternion};
use crate::sampling::{random_unit, rng};
use crate::slicefn::Polynomial;
use crate::tolerance::Tolerances;
use crate::Error;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Informational; the subcommand on the command line decides what runs.
    pub command: Option<String>,
    pub suite: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub set: Option<SliceSet>,
    pub grid: Option<GridConfig>,
    /// One slice of series data, extended to its σ-ball.
    pub series: Option<SeriesConfig>,
    /// Two slices of series data, extended by the two-slice formula.
    pub slices: Option<Vec<SeriesConfig>>,
    /// Evaluation points as `[w, x, y, z]`.
    pub points: Option<Vec<[f64; 4]>>,
    pub function: Option<FunctionConfig>,
    /// Polyline vertices `[x, y]`.
    pub path: Option<Vec<[f64; 2]>>,
    pub units: Option<Vec<ImaginaryUnit>>,
    pub base: Option<ImaginaryUnit>,
    pub phi: Option<Phi>,
    /// Samples along each path.
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Raster request: explicit units or a number of seeded random ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub units: Option<Vec<ImaginaryUnit>>,
    pub random_units: Option<usize>,
    pub x_range: Option<[f64; 2]>,
    pub y_range: Option<[f64; 2]>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

/// Power series `sum (z - c)^n a_n` on the disk `B_unit(c, radius)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub unit: ImaginaryUnit,
    pub center_x: f64,
    #[serde(default)]
    pub center_y: f64,
    pub radius: f64,
    pub coefficients: Vec<[f64; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionConfig {
    /// `q -> sum q^n a_n` restricted to `domain`.
    Polynomial { coefficients: Vec<[f64; 4]>, domain: SliceSet },
    PsiPhi {
        base: ImaginaryUnit,
        phi: Phi,
        #[serde(default)]
        tilde: bool,
    },
    /// σ-ball extension of one slice of series data.
    Series { series: SeriesConfig },
}

fn missing(field: &str) -> Error {
    Error::ConfigParse(format!("missing field `{field}`"))
}

fn quaternions(c: &[[f64; 4]]) -> Vec<Quaternion> {
    c.iter().map(|a| Quaternion::from_array(*a)).collect()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigParse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn require_set(&self) -> Result<&SliceSet, Error> {
        self.set.as_ref().ok_or_else(|| missing("set"))
    }

    pub fn require_path(&self) -> Result<ComplexPath, Error> {
        let v = self.path.as_ref().ok_or_else(|| missing("path"))?;
        let verts = v.iter().map(|p| (p[0], p[1])).collect();
        ComplexPath::new(verts).map_err(|e| Error::ConfigParse(format!("path: {e}")))
    }

    pub fn require_points(&self) -> Result<Vec<Quaternion>, Error> {
        Ok(quaternions(self.points.as_ref().ok_or_else(|| missing("points"))?))
    }

    pub fn samples_or_default(&self) -> usize {
        self.samples.unwrap_or(self.tolerances.n_path)
    }

    /// The extension described by `slices` (two entries) or else `series`.
    pub fn require_extension(&self) -> Result<ExtendedFunction, Error> {
        if let Some(s) = &self.slices {
            if s.len() != 2 {
                return Err(Error::ConfigParse(format!("`slices` needs exactly 2 entries, got {}", s.len())));
            }
            let d1 = s[0].slice_data()?;
            let d2 = s[1].slice_data()?;
            return ExtendedFunction::new(d1, d2).map_err(|e| Error::ConfigParse(format!("slices: {e}")));
        }
        self.series.as_ref().ok_or_else(|| missing("series` or `slices"))?.sigma_extension()
    }
}

impl GridConfig {
    pub fn to_spec(&self, seed: u64) -> Result<GridSpec, Error> {
        let units = match (&self.units, self.random_units) {
            (Some(u), _) if !u.is_empty() => u.clone(),
            (_, Some(n)) if n > 0 => {
                let mut r = rng(seed);
                (0..n).map(|_| random_unit(&mut r)).collect()
            }
            _ => return Err(missing("grid.units` or `grid.random_units")),
        };
        let nx = self.nx.ok_or_else(|| missing("grid.nx"))?;
        let ny = self.ny.ok_or_else(|| missing("grid.ny"))?;
        if nx == 0 || ny == 0 {
            return Err(Error::ConfigParse("grid resolution must be positive".into()));
        }
        Ok(GridSpec {
            units,
            x_range: self.x_range.ok_or_else(|| missing("grid.x_range"))?,
            y_range: self.y_range.ok_or_else(|| missing("grid.y_range"))?,
            nx,
            ny,
        })
    }
}

impl SeriesConfig {
    pub fn slice_data(&self) -> Result<HolomorphicSliceData, Error> {
        HolomorphicSliceData::series(
            self.unit,
            Complex64::new(self.center_x, self.center_y),
            self.radius,
            quaternions(&self.coefficients),
        )
        .map_err(|e| Error::ConfigParse(format!("series: {e}")))
    }

    pub fn sigma_extension(&self) -> Result<ExtendedFunction, Error> {
        let p = embed(&self.unit, self.center_x, self.center_y);
        sigma_ball_extension(&p, self.radius, quaternions(&self.coefficients))
            .map_err(|e| Error::ConfigParse(format!("series: {e}")))
    }
}

impl FunctionConfig {
    pub fn model(&self) -> Result<Box<dyn SliceModel>, Error> {
        Ok(match self {
            FunctionConfig::Polynomial { coefficients, domain } => Box::new(PolynomialModel {
                poly: Polynomial::new(quaternions(coefficients)),
                domain: domain.clone(),
            }),
            FunctionConfig::PsiPhi { base, phi, tilde } => {
                if *tilde {
                    Box::new(PsiPhi::tilde(*base, phi.clone()))
                } else {
                    Box::new(PsiPhi::new(*base, phi.clone()))
                }
            }
            FunctionConfig::Series { series } => Box::new(ExtensionModel { ext: series.sigma_extension()? }),
        })
    }
}
