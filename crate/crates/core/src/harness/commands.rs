//! The five `slicelab` commands. Each returns its artifact as text plus an
//! overall pass flag; the binary decides where the text goes.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use crate::extension::extend_point_eval;
use crate::geometry::{membership_grid, write_grid_csv, Phi, SliceSet};
use crate::harness::config::RunConfig;
use crate::harness::report::{Checks, SuiteReport};
use crate::harness::suites;
use crate::pathslice::{
    counterexample_report, default_candidates, default_premise_unit, default_witness_path, lifting_witnesses,
    path_repformula, path_slice_consistency, psi_s_eval, BranchFunction, PsiPhi,
};
use crate::path::ComplexPath;
use crate::quaternion::{embed, ImaginaryUnit, Quaternion, SlicePoint};
use crate::sampling::{random_pair, random_unit, rng};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Grid,
    Counterexample,
    Extend,
    Paths,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Grid => "grid",
            Command::Counterexample => "counterexample",
            Command::Extend => "extend",
            Command::Paths => "paths",
        }
    }
}

/// Parsed command line.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub pass: bool,
    /// Destination from the command line or the config; stdout when absent.
    pub out: Option<PathBuf>,
}

/// 0 when every check passes, 1 on a failed check or evaluation error, 2 on a bad configuration.
pub fn exit_code(result: &Result<Outcome, Error>) -> i32 {
    match result {
        Ok(o) if o.pass => 0,
        Ok(_) => 1,
        Err(Error::ConfigParse(_)) | Err(Error::Io(_)) => 2,
        Err(_) => 1,
    }
}

pub fn run(inv: &Invocation) -> Result<Outcome, Error> {
    let cfg = match &inv.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let seed = inv.seed.or(cfg.seed).unwrap_or(crate::harness::config::DEFAULT_SEED);
    let (output, pass) = match inv.command {
        Command::Verify => report_text(verify(inv, &cfg, seed)?),
        Command::Grid => (grid(&cfg, seed)?, true),
        Command::Counterexample => report_text(counterexample(&cfg, seed)?),
        Command::Extend => extend(&cfg)?,
        Command::Paths => report_text(paths(&cfg, seed)?),
    };
    Ok(Outcome { output, pass, out: inv.out.clone().or(cfg.out.clone()) })
}

/// Writes the artifact to its destination, creating parent directories.
pub fn write_outcome(o: &Outcome) -> Result<(), Error> {
    match &o.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, &o.output)?;
        }
        None => print!("{}", o.output),
    }
    Ok(())
}

fn report_text(r: SuiteReport) -> (String, bool) {
    (r.to_json(), r.pass)
}

pub fn verify(inv: &Invocation, cfg: &RunConfig, seed: u64) -> Result<SuiteReport, Error> {
    let suite = inv.suite.clone().or_else(|| cfg.suite.clone()).unwrap_or_else(|| "all".into());
    let checks = suites::run_suites(&suite, seed, &cfg.tolerances)?;
    Ok(SuiteReport::new("verify", Some(suite), seed, checks, Value::Null))
}

pub fn grid(cfg: &RunConfig, seed: u64) -> Result<String, Error> {
    let set = cfg.require_set()?;
    let spec = cfg.grid.as_ref().ok_or_else(|| Error::ConfigParse("missing field `grid`".into()))?.to_spec(seed)?;
    let rows = membership_grid(set, &spec);
    let mut buf = Vec::new();
    write_grid_csv(&rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("ascii csv"))
}

pub const EXTEND_CSV_HEADER: &str = "x,y,ux,uy,uz,fw,fx,fy,fz";

/// Evaluates the extension at each point. Points outside the extension domain
/// get `NaN` values and fail the run.
pub fn extend(cfg: &RunConfig) -> Result<(String, bool), Error> {
    let ext = cfg.require_extension()?;
    let points = cfg.require_points()?;
    let mut out = String::new();
    writeln!(out, "{EXTEND_CSV_HEADER}").expect("string write");
    let mut pass = true;
    for q in &points {
        let p = SlicePoint::from_quaternion(q);
        let v = match extend_point_eval(&ext, &p) {
            Ok(v) => v,
            Err(Error::OutOfExtension) | Err(Error::OutOfDomain) => {
                pass = false;
                Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN)
            }
            Err(e) => return Err(e),
        };
        let [ux, uy, uz] = p.unit.to_array();
        writeln!(out, "{},{},{ux},{uy},{uz},{},{},{},{}", p.x, p.y, v.w, v.x, v.y, v.z).expect("string write");
    }
    Ok((out, pass))
}

fn q_json(q: &Quaternion) -> Value {
    json!(q.to_array())
}

/// Branch values, the pointwise-formula residual table, path-formula residuals
/// and the lifting witness search for `Psi_phi` (default `phi(K) = |K - J| / 2`).
pub fn counterexample(cfg: &RunConfig, seed: u64) -> Result<SuiteReport, Error> {
    let tol = cfg.tolerances;
    let base = cfg.base.unwrap_or_else(ImaginaryUnit::j);
    let phi = cfg.phi.clone().unwrap_or(Phi::HalfDistance);
    let mut r = rng(seed);
    let mut c = Checks::new("");
    let pi4 = std::f64::consts::FRAC_PI_4;

    let targets: [(&str, Complex64); 3] =
        [("-J", Complex64::new(0.0, -1.0)), ("J", Complex64::new(0.0, 1.0)), ("J/2+1", Complex64::new(1.0, 0.5))];
    let mut branch_rows = Vec::new();
    let mut branch_err: f64 = 0.0;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let b = BranchFunction::new(base, s);
        for (label, z) in targets {
            let expected = match label {
                "-J" => Some(embed(&base, 3f64.sqrt() * pi4.cos(), -(3f64.sqrt()) * pi4.sin())),
                "J" if s < 0.5 => Some(embed(&base, -pi4.cos(), -pi4.sin())),
                "J" if s > 0.5 => Some(embed(&base, pi4.cos(), pi4.sin())),
                "J" => None,
                _ => Some(Quaternion::real(2f64.sqrt())),
            };
            let value = psi_s_eval(&b, z).ok();
            let error = match (&value, &expected) {
                (Some(v), Some(e)) => Some(v.dist(e)),
                _ => None,
            };
            // at s = 1/2 both J and -J lie on cuts; the value is undefined there
            if s != 0.5 {
                branch_err = branch_err.max(error.unwrap_or(f64::INFINITY));
            }
            branch_rows.push(json!({
                "s": s,
                "point": label,
                "value": value.as_ref().map(q_json),
                "expected": expected.as_ref().map(q_json),
                "error": error,
                "on_cut": value.is_none(),
            }));
        }
    }
    c.at_most("branch_values", branch_err, tol.alg, "Psi_s at -J, J and J/2 + 1");

    // pointwise formula with (J, -J) at q = I
    let f = PsiPhi::new(base, phi.clone());
    let at_j = f.eval(&SlicePoint::new(base, 0.0, 1.0));
    let at_neg_j = f.eval(&SlicePoint::new(base.neg(), 0.0, 1.0));
    let mut units = vec![base.orthogonal()];
    units.extend((0..63).map(|_| random_unit(&mut r)));
    let mut table = Vec::new();
    let mut classical: Vec<f64> = Vec::new();
    for u in &units {
        let ij = u.as_quaternion() * base.as_quaternion();
        let residual = match (f.eval(&SlicePoint::new(*u, 0.0, 1.0)), &at_j, &at_neg_j) {
            (Ok(fi), Ok(fj), Ok(fk)) => Some(fi - ((Quaternion::one() - ij) * 0.5 * *fj + (Quaternion::one() + ij) * 0.5 * *fk)),
            _ => None,
        };
        if let Some(res) = &residual {
            classical.push(res.norm());
        }
        table.push(json!({
            "unit": u.to_array(),
            "phi": phi.eval(&base, u),
            "distance_to_base": u.distance(&base),
            "residual": residual.as_ref().map(q_json),
            "residual_norm": residual.map(|q| q.norm()),
        }));
    }
    let mut closed_form = Value::Null;
    if phi.is_constant() {
        c.at_most("pointwise_formula_constant_phi", crate::par::max_f64(&classical), tol.check, "constant phi: the pointwise formula holds");
    } else if phi == Phi::HalfDistance {
        let band: Vec<ImaginaryUnit> = units
            .iter()
            .copied()
            .filter(|u| {
                let d = u.distance(&base);
                d > 1.0 + 1e-6 && d < 2.0 - 1e-6
            })
            .collect();
        let rep = counterexample_report(&base, &band)?;
        let row = &rep.rows[0];
        c.at_most("orthogonal_residual_norm", (row.residual_norm - 2f64.sqrt()).abs(), tol.alg, "pointwise formula residual is sqrt(2) for I orthogonal to J");
        c.at_most("closed_form_gap", rep.max_gap, tol.alg, "residual equals (1 - IJ) Psi_{phi(I)}(J)");
        let norm_gap = rep.rows.iter().map(|r| (r.residual_norm - r.expected_norm).abs()).fold(0.0, f64::max);
        c.at_most("residual_norm_closed_form", norm_gap, tol.alg, "residual norm equals |1 - IJ|");
        closed_form = serde_json::to_value(&rep).expect("serializable");
    }

    // path formula on lifts that avoid every cut
    let mut path_rows = Vec::new();
    let mut path_worst: f64 = 0.0;
    for _ in 0..10 {
        let verts = vec![
            (r.gen_range(-1.0..1.0), 0.0),
            (r.gen_range(-1.5..1.5), r.gen_range(0.0..0.45)),
            (r.gen_range(-1.5..1.5), r.gen_range(0.0..0.45)),
        ];
        let path = ComplexPath::new(verts.clone()).expect("valid polyline");
        let i = random_unit(&mut r);
        let (j, k) = random_pair(&mut r, 0.1);
        let res = path_repformula(&f, &path, &i, &j, &k, tol.n_path);
        let max = res.as_ref().map_or(f64::INFINITY, |r| r.max_residual);
        path_worst = path_worst.max(max);
        path_rows.push(json!({
            "path": verts.iter().map(|v| [v.0, v.1]).collect::<Vec<_>>(),
            "units": [i.to_array(), j.to_array(), k.to_array()],
            "max_residual": res.as_ref().ok().map(|r| r.max_residual),
            "error": res.err().map(|e| e.to_string()),
        }));
    }
    c.at_most("path_formula", path_worst, tol.check, "path formula on contained lifts");

    // lifting witnesses on the set with the cut of -J restored
    let set = SliceSet::RayComplementTilde { base, phi: phi.clone() };
    let path = default_witness_path();
    let kp = default_premise_unit(&base);
    let cands = default_candidates(&base, 64, 32, seed);
    let witnesses = lifting_witnesses(&set, &path, &base, &kp, &cands, tol.n_path);
    let witness_json = match &witnesses {
        Ok(ws) => json!({
            "path": path.vertices().iter().map(|v| [v.0, v.1]).collect::<Vec<_>>(),
            "j": base.to_array(),
            "k": kp.to_array(),
            "candidates": cands.len(),
            "first": ws.first().map(|w| json!({"unit": w.unit.to_array(), "exit_t": w.exit_t})),
            "count": ws.len(),
            "all": ws.iter().map(|w| json!({"unit": w.unit.to_array(), "exit_t": w.exit_t})).collect::<Vec<_>>(),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let count = witnesses.as_ref().map_or(0, |w| w.len());
    if phi.is_constant() {
        c.at_most("witness_count", count as f64, 0.0, "constant phi gives an axially symmetric set");
    } else if phi == Phi::HalfDistance {
        c.holds("premises_contained", witnesses.is_ok(), "lifts along J and K' stay in the set");
        c.at_least("witness_count", count as f64, 1.0, "some lift leaves the set");
    }

    let data = json!({
        "base": base.to_array(),
        "phi": phi,
        "branch_values": branch_rows,
        "pointwise_residuals": table,
        "closed_form": closed_form,
        "path_formula": path_rows,
        "witness": witness_json,
    });
    Ok(SuiteReport::new("counterexample", None, seed, c.into_records(), data))
}

/// Path formula and path-slice consistency of a configured function along a configured path.
pub fn paths(cfg: &RunConfig, seed: u64) -> Result<SuiteReport, Error> {
    let tol = cfg.tolerances;
    let f = cfg.function.as_ref().ok_or_else(|| Error::ConfigParse("missing field `function`".into()))?.model()?;
    let path = cfg.require_path()?;
    let units = match &cfg.units {
        Some(u) if u.len() >= 3 => u.clone(),
        Some(u) => return Err(Error::ConfigParse(format!("`units` needs at least 3 entries, got {}", u.len()))),
        None => {
            let mut r = rng(seed);
            (0..8).map(|_| random_unit(&mut r)).collect()
        }
    };
    let n = cfg.samples_or_default();
    let mut c = Checks::new("");
    let containment: Vec<Value> = units
        .iter()
        .map(|u| {
            let pc = f.lift_containment(&path, u, n);
            json!({"unit": u.to_array(), "contained": pc.contained, "exit_t": pc.exit_t})
        })
        .collect();
    let degenerate = |e: Error| match e {
        Error::DegeneratePair => Error::ConfigParse("units 2 and 3 coincide".into()),
        e => e,
    };
    let formula = match path_repformula(f.as_ref(), &path, &units[0], &units[1], &units[2], n) {
        Err(Error::LiftNotContained { unit, t }) => Err(json!({"lift_not_contained": {"unit": unit, "t": t}})),
        other => Ok(other.map_err(degenerate)?),
    };
    let formula_json = match &formula {
        Ok(rep) => {
            c.at_most("path_formula", rep.max_residual, tol.check, "f(gamma^I) from f(gamma^J) and f(gamma^K)");
            json!({"params": rep.params, "residuals": rep.residuals, "max_residual": rep.max_residual})
        }
        Err(v) => {
            c.holds("path_formula_lifts_contained", false, "all three lifts stay in the domain");
            v.clone()
        }
    };
    let consistency_json = match path_slice_consistency(f.as_ref(), &path, &units, n) {
        Ok(rep) => {
            c.at_most("path_slice_consistency", rep.max_defect, tol.check, "endpoint values fit (1, I) q_gamma");
            serde_json::to_value(&rep).expect("serializable")
        }
        Err(Error::LiftNotContained { unit, t }) => {
            c.holds("consistency_lifts_contained", false, "every lift stays in the domain");
            json!({"lift_not_contained": {"unit": unit, "t": t}})
        }
        Err(e) => return Err(degenerate(e)),
    };
    let data = json!({
        "function": f.name(),
        "path": path.vertices().iter().map(|v| [v.0, v.1]).collect::<Vec<_>>(),
        "samples": n,
        "containment": containment,
        "path_formula": formula_json,
        "consistency": consistency_json,
    });
    Ok(SuiteReport::new("paths", None, seed, c.into_records(), data))
}
