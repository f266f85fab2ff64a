//! Verification suites behind `slicelab verify`. Each suite draws everything
//! from its own seeded stream and emits checks in a fixed order, so a report
//! depends only on the seed and the tolerances.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::extension::{
    cr_residual_fn, extend_pair_eval, holo_eval, sigma_ball_extension, sigma_series_eval, Convergence,
    ExtendedFunction, HolomorphicSliceData,
};
use crate::geometry::{
    default_real_grid, is_real_connected_sampled, path_in_set, probe_topology, real_member_runs, sigma_ball_contains,
    slice_inradius, Phi, SliceSet,
};
use crate::harness::report::{CheckRecord, Checks};
use crate::par;
use crate::path::ComplexPath;
use crate::pathslice::{
    continuity_probe, counterexample_report, cut_jump, default_candidates, default_premise_unit, default_witness_path,
    lifting_witnesses, path_repformula, path_slice_consistency, psi_s_eval, psi_s_raw, BranchFunction, ExtensionModel,
    FnModel, PolynomialModel, PsiPhi, SliceModel,
};
use crate::quaternion::{
    embed, interp_matrix_inv, ratio, split_basis, unit_of, ImaginaryUnit, InterpMatrix, Quaternion, Rational,
    SlicePoint, UnitOf,
};
use crate::sampling::{
    random_in_ball, random_pair, random_quaternion, random_rational_quaternion, random_rational_unit, random_unit,
    rng, SeededRng,
};
use crate::slicefn::{
    random_triples, repformula_coefficients, repformula_il, repformula_mf, repformula_point, sliceness_check_with,
    stem_from_pair, Polynomial,
};
use crate::tolerance::Tolerances;
use crate::Error;

pub const SUITES: [&str; 8] = ["algebra", "slice", "extension", "branch", "counterexample", "topology", "witness", "paths"];

/// Suites selected by a name; `all` expands to every suite in order.
pub fn resolve(name: &str) -> Result<Vec<&'static str>, Error> {
    match name.trim() {
        "" => Err(Error::ConfigParse("suite name is empty".into())),
        "all" => Ok(SUITES.to_vec()),
        n => SUITES
            .iter()
            .find(|s| **s == n)
            .map(|s| vec![*s])
            .ok_or_else(|| Error::ConfigParse(format!("unknown suite `{n}` (expected one of {}, all)", SUITES.join(", ")))),
    }
}

/// Per-suite stream, so a suite's samples do not depend on which others ran.
fn suite_seed(seed: u64, name: &str) -> u64 {
    let idx = SUITES.iter().position(|s| *s == name).unwrap_or(0) as u64;
    seed.wrapping_add((idx + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_suite(name: &str, seed: u64, tol: &Tolerances) -> Result<Vec<CheckRecord>, Error> {
    let s = suite_seed(seed, name);
    Ok(match name {
        "algebra" => algebra(s, tol),
        "slice" => slice(s, tol),
        "extension" => extension(s, tol),
        "branch" => branch(s, tol),
        "counterexample" => counterexample(s, tol),
        "topology" => topology(s, tol),
        "witness" => witness(s, tol),
        "paths" => paths(s, tol),
        other => return Err(Error::ConfigParse(format!("unknown suite `{other}`"))),
    })
}

pub fn run_suites(name: &str, seed: u64, tol: &Tolerances) -> Result<Vec<CheckRecord>, Error> {
    let mut out = Vec::new();
    for s in resolve(name)? {
        out.extend(run_suite(s, seed, tol)?);
    }
    Ok(out)
}

fn ball(radius: f64) -> SliceSet {
    SliceSet::EuclideanBall { center: Quaternion::zero(), radius }
}

/// Unit orthogonal to `i` at a random angle around it.
fn random_orthogonal(r: &mut SeededRng, i: &ImaginaryUnit) -> ImaginaryUnit {
    let o = i.orthogonal();
    let o2 = i.cross(&o).expect("orthogonal units");
    o.rotate_toward(&o2, r.gen_range(0.0..TAU))
}

fn random_poly(r: &mut SeededRng, degree: usize) -> Polynomial {
    Polynomial::new((0..=degree).map(|_| random_quaternion(r, 1.0)).collect())
}

fn e_j(base: &ImaginaryUnit, radius: f64, theta: f64) -> Quaternion {
    embed(base, radius * theta.cos(), radius * theta.sin())
}

fn algebra(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("algebra");
    let mut r = rng(seed);
    let pairs: Vec<(ImaginaryUnit, ImaginaryUnit)> = (0..1000).map(|_| random_pair(&mut r, 0.1)).collect();
    let id = InterpMatrix::identity();
    let dev = par::map(&pairs, |(j, k)| match interp_matrix_inv(j, k) {
        Ok(m) => m.matmul(&InterpMatrix::vandermonde(j, k)).max_deviation(&id),
        Err(_) => f64::INFINITY,
    });
    c.at_most("interp_inverse_identity", par::max_f64(&dev), tol.alg, "inverse of [[1,J],[1,K]] times the matrix is the identity");
    let jk = par::map(&pairs, |(j, k)| {
        let (jq, kq) = (j.as_quaternion(), k.as_quaternion());
        match (jq - kq).inverse() {
            Ok(d) => (d * jq + kq * d).norm(),
            Err(_) => f64::INFINITY,
        }
    });
    c.at_most("jk_identity", par::max_f64(&jk), tol.alg, "(J-K)^-1 J = -K (J-K)^-1");

    let splits: Vec<(Quaternion, ImaginaryUnit, ImaginaryUnit)> = (0..1000)
        .map(|_| {
            let a = random_quaternion(&mut r, 2.0);
            let i = random_unit(&mut r);
            let j = random_orthogonal(&mut r, &i);
            (a, i, j)
        })
        .collect();
    let split = par::map(&splits, |(a, i, j)| match split_basis(a, i, j) {
        Ok((a1, a2)) => {
            let round = (a1 + a2 * j.as_quaternion()).dist(a);
            let off = |q: &Quaternion| (q.im() - i.as_quaternion() * q.dot_im(&i.as_quaternion())).norm();
            round.max(off(&a1)).max(off(&a2))
        }
        Err(_) => f64::INFINITY,
    });
    c.at_most("split_basis_roundtrip", par::max_f64(&split), 1e-13, "a = a1 + a2 J with a1, a2 in C_I");

    let embeds: Vec<(ImaginaryUnit, f64, f64)> =
        (0..1000).map(|_| (random_unit(&mut r), r.gen_range(-3.0..3.0), r.gen_range(1e-3..3.0))).collect();
    let back = par::map(&embeds, |(u, x, y)| match unit_of(&embed(u, *x, *y)) {
        UnitOf::Unit(v) => v.distance(u),
        UnitOf::Real => f64::INFINITY,
    });
    c.at_most("unit_of_embed", par::max_f64(&back), tol.unit, "unit of x + yI is I for y > 0");
    let real_ok = embeds.iter().all(|(u, x, _)| embed(u, *x, 0.0) == Quaternion::real(*x));
    c.holds("embed_real_unit_free", real_ok, "x + 0I does not depend on I");

    // exact rational mode
    let (mut inv_bad, mut jk_bad, mut split_bad, mut unit_bad) = (0usize, 0usize, 0usize, 0usize);
    let one = ratio(1, 1);
    for _ in 0..100 {
        let j = random_rational_unit(&mut r);
        let mut k = random_rational_unit(&mut r);
        while k == j {
            k = random_rational_unit(&mut r);
        }
        match interp_matrix_inv(&j, &k) {
            Ok(m) if m.matmul(&InterpMatrix::vandermonde(&j, &k)) == InterpMatrix::identity() => {}
            _ => inv_bad += 1,
        }
        let (jq, kq) = (j.as_quaternion(), k.as_quaternion());
        match (&jq - &kq).inverse_with(0.0) {
            Ok(d) if &(&d * &jq) + &(&kq * &d) == Quaternion::zero() => {}
            _ => jk_bad += 1,
        }
        // an exactly orthogonal rational pair: rotate (i, j) by a rational quaternion
        let q = loop {
            let q = random_rational_quaternion(&mut r);
            if q != Quaternion::zero() {
                break q;
            }
        };
        let qi = q.inverse_with(0.0).expect("nonzero");
        let rot = |u: Quaternion<Rational>| {
            let v = &(&q * &u) * &qi;
            ImaginaryUnit::try_new(v.x, v.y, v.z).expect("rotation keeps unit length")
        };
        let (ii, jj) = (rot(Quaternion::i()), rot(Quaternion::j()));
        let a = random_rational_quaternion(&mut r);
        match split_basis(&a, &ii, &jj) {
            Ok((a1, a2)) if &a1 + &(&a2 * &jj.as_quaternion()) == a => {}
            _ => split_bad += 1,
        }
        let x = ratio(r.gen_range(-20..=20), r.gen_range(1..=9));
        let y = ratio(r.gen_range(1..=20), r.gen_range(1..=9));
        let e = embed(&ii, x, y.clone());
        if e.im().scale(&(one.clone() / y)) != ii.as_quaternion() {
            unit_bad += 1;
        }
    }
    c.at_most("rational_interp_inverse_exact", inv_bad as f64, 0.0, "exact inverse of [[1,J],[1,K]]");
    c.at_most("rational_jk_identity_exact", jk_bad as f64, 0.0, "(J-K)^-1 J = -K (J-K)^-1, exactly");
    c.at_most("rational_split_basis_exact", split_bad as f64, 0.0, "a = a1 + a2 J, exactly");
    c.at_most("rational_unit_of_embed_exact", unit_bad as f64, 0.0, "Im(x + yI) / y = I, exactly");
    c.into_records()
}

fn slice(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("slice");
    let mut r = rng(seed);
    let set = ball(2.0);
    let triples = random_triples(&mut r, &set, 1000, 2.0, 0.1);
    c.at_least("triples_sampled", triples.len() as f64, 1000.0, "sample size");
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for (d, chunk) in triples.chunks(112).enumerate() {
        let p = random_poly(&mut r, d);
        let rep = sliceness_check_with(|pt| p.eval(&pt.to_quaternion()), &set, chunk, 1e-10);
        worst = worst.max(rep.max_residual);
        skipped += rep.skipped;
    }
    c.at_most("polynomial_point_formula", worst, 1e-10, "two-slice formula for sum q^n a_n, degree <= 8");
    c.at_most("polynomial_point_formula_skipped", skipped as f64, 0.0, "every sampled point lies in the ball");

    let mut path_worst: f64 = 0.0;
    let mut path_errors = 0;
    for n in 0..50 {
        let x0 = r.gen_range(-1.0..1.0);
        let verts = vec![(x0, 0.0), (r.gen_range(-1.0..1.0), r.gen_range(0.0..1.0)), (r.gen_range(-1.0..1.0), r.gen_range(0.0..1.0))];
        let path = ComplexPath::new(verts).expect("valid polyline");
        let model = PolynomialModel { poly: random_poly(&mut r, n % 9), domain: set.clone() };
        let i = random_unit(&mut r);
        let (j, k) = random_pair(&mut r, 0.1);
        match path_repformula(&model, &path, &i, &j, &k, 128) {
            Ok(rep) => path_worst = path_worst.max(rep.max_residual),
            Err(_) => path_errors += 1,
        }
    }
    c.at_most("polynomial_path_formula", path_worst, 1e-10, "two-slice formula along lifted paths");
    c.at_most("polynomial_path_formula_errors", path_errors as f64, 0.0, "all path lifts contained");

    let data: Vec<(ImaginaryUnit, ImaginaryUnit, ImaginaryUnit, Quaternion, Quaternion)> = (0..1000)
        .map(|_| {
            let i = random_unit(&mut r);
            let (j, k) = random_pair(&mut r, 0.1);
            (i, j, k, random_quaternion(&mut r, 2.0), random_quaternion(&mut r, 2.0))
        })
        .collect();
    let forms = par::map(&data, |(i, j, k, fj, fk)| {
        let (Ok(lf), Ok(il), Ok(mf)) = (repformula_point(i, j, k, fj, fk), repformula_il(i, j, k, fj, fk), repformula_mf(i, j, k, fj, fk)) else {
            return f64::INFINITY;
        };
        lf.dist(&il).max(lf.dist(&mf)).max(il.dist(&mf))
    });
    c.at_most("form_equivalence", par::max_f64(&forms), tol.alg, "matrix, interpolation and linear forms agree");
    let partition = par::map(&data, |(i, j, k, _, _)| match repformula_coefficients(i, j, k) {
        Ok((a, b)) => (a + b).dist(&Quaternion::one()),
        Err(_) => f64::INFINITY,
    });
    c.at_most("coefficient_partition", par::max_f64(&partition), tol.alg, "(I-K)(J-K)^-1 + (I-J)(K-J)^-1 = 1");
    let recon = par::map(&data, |(_, j, k, fj, fk)| match stem_from_pair(j, k, fj, fk) {
        Ok((a, b)) => (a + j.as_quaternion() * b).dist(fj).max((a + k.as_quaternion() * b).dist(fk)),
        Err(_) => f64::INFINITY,
    });
    c.at_most("stem_reconstruction", par::max_f64(&recon), tol.alg, "(1, J) F = fJ and (1, K) F = fK");

    // a function that is 0 on one slice and 1 elsewhere is not slice
    let j = random_unit(&mut r);
    let piecewise = move |p: &SlicePoint| {
        if p.unit.approx_eq(&j, 1e-12) || p.unit.approx_eq(&j.neg(), 1e-12) {
            Quaternion::zero()
        } else {
            Quaternion::one()
        }
    };
    let whole = SliceSet::Complement { set: Box::new(SliceSet::Union { sets: vec![] }) };
    let triples: Vec<_> = (0..20)
        .map(|_| crate::slicefn::SliceSampleTriple {
            x: r.gen_range(-1.0..1.0),
            y: r.gen_range(0.1..1.0),
            i: random_unit(&mut r),
            j,
            k: j.neg(),
        })
        .collect();
    let rep = sliceness_check_with(piecewise, &whole, &triples, tol.check);
    c.at_least("non_slice_detected", rep.max_residual, 1.0 - 1e-12, "piecewise constant function fails the formula");
    c.into_records()
}

fn extension(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("extension");
    let mut r = rng(seed);
    let unit = random_unit(&mut r);
    let z0 = Complex64::new(0.0, 0.0);
    let mut mono: f64 = 0.0;
    let mut mono_cr: f64 = 0.0;
    for k in 0..=8usize {
        let mut coeffs = vec![Quaternion::zero(); k + 1];
        coeffs[k] = Quaternion::one();
        let ext = ExtendedFunction::new(
            HolomorphicSliceData::series(unit, z0, 1.0, coeffs.clone()).expect("positive radius"),
            HolomorphicSliceData::series(unit.neg(), z0, 1.0, coeffs).expect("positive radius"),
        )
        .expect("opposite units");
        let probes: Vec<Quaternion> = (0..500).map(|_| random_in_ball(&mut r, 0.99)).collect();
        let errs = par::map(&probes, |q| extend_pair_eval(&ext, q).map_or(f64::INFINITY, |v| v.dist(&q.powi(k as u32))));
        mono = mono.max(par::max_f64(&errs));
        let cr_probes: Vec<(ImaginaryUnit, f64, f64)> =
            (0..100).map(|_| (random_unit(&mut r), r.gen_range(-0.6..0.6), r.gen_range(0.05..0.6))).collect();
        let crs = par::map(&cr_probes, |(u, x, y)| {
            let f = |x: f64, y: f64| extend_pair_eval(&ext, &embed(u, x, y)).unwrap_or(Quaternion::new(f64::NAN, 0.0, 0.0, 0.0));
            cr_residual_fn(f, u, *x, *y, tol.h_fd)
        });
        mono_cr = crs.iter().copied().fold(mono_cr, f64::max);
    }
    c.at_most("monomial_coherence", mono, 1e-10, "extension of z^k from (I, -I) is q^k");
    c.at_most("monomial_cauchy_riemann", mono_cr, tol.cr, "extension is holomorphic on every slice");

    let i1 = random_unit(&mut r);
    let i2 = random_unit(&mut r);
    let a: Vec<Quaternion> = (0..6).map(|_| random_quaternion(&mut r, 1.0)).collect();
    let ext = ExtendedFunction::new(
        HolomorphicSliceData::series(i1, z0, 1.0, a.clone()).expect("positive radius"),
        HolomorphicSliceData::series(i2, z0, 1.0, a).expect("positive radius"),
    )
    .expect("distinct units");
    let probes: Vec<(f64, f64, ImaginaryUnit)> =
        (0..500).map(|_| (r.gen_range(-0.6..0.6), r.gen_range(0.01..0.6), random_unit(&mut r))).collect();
    let res = par::map(&probes, |(x, y, k)| {
        let z = Complex64::new(*x, *y);
        let (Ok(f1), Ok(f2)) = (ext.data1.eval(z), ext.data2.eval(z)) else { return (f64::INFINITY, f64::INFINITY) };
        let restrict = |u: &ImaginaryUnit, f: &Quaternion| extend_pair_eval(&ext, &embed(u, *x, *y)).map_or(f64::INFINITY, |v| v.dist(f));
        let restriction = restrict(&i1, &f1).max(restrict(&i2, &f2));
        let g = extend_pair_eval(&ext, &embed(k, *x, *y));
        let rf = repformula_point(k, &i1, &i2, &f1, &f2);
        let coherence = match (g, rf) {
            (Ok(g), Ok(rf)) => g.dist(&rf),
            _ => f64::INFINITY,
        };
        (restriction, coherence)
    });
    let restriction: Vec<f64> = res.iter().map(|v| v.0).collect();
    let coherence: Vec<f64> = res.iter().map(|v| v.1).collect();
    c.at_most("restriction_reproduces_data", par::max_f64(&restriction), tol.alg, "extension restricted to the data slices");
    c.at_most("representation_coherence", par::max_f64(&coherence), tol.alg, "extension equals the two-slice formula");
    let cr_probes = &probes[..100];
    let crs = par::map(cr_probes, |(x, y, k)| {
        let f = |x: f64, y: f64| extend_pair_eval(&ext, &embed(k, x, y)).unwrap_or(Quaternion::new(f64::NAN, 0.0, 0.0, 0.0));
        cr_residual_fn(f, k, *x, y.max(0.05), tol.h_fd)
    });
    c.at_most("extension_cauchy_riemann", par::max_f64(&crs), tol.cr, "two-slice extension is holomorphic on every slice");

    let geo = HolomorphicSliceData::series(ImaginaryUnit::i(), z0, 1.0, vec![Quaternion::one(); 200]).expect("positive radius");
    let v = holo_eval(&geo, Complex64::new(0.0, 0.5)).map_or(f64::INFINITY, |v| v.value.dist(&Quaternion::new(0.8, 0.4, 0.0, 0.0)));
    c.at_most("geometric_series", v, tol.alg, "sum (0.5i)^n = 1 / (1 - 0.5i)");

    let p = random_quaternion(&mut r, 0.5);
    let growth: f64 = r.gen_range(0.5..2.0);
    let a0 = random_quaternion(&mut r, 1.0);
    let coeffs: Vec<Quaternion> = (0..400).map(|n| a0 * (growth.powi(n) * (1.0 + 0.01 * n as f64))).collect();
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    while checked < 1000 {
        let q = p + random_quaternion(&mut r, 2.0 / growth);
        let v = sigma_series_eval(&p, &coeffs, &q, 400);
        if v.sigma > 0.9 * v.radius && v.sigma < 1.1 * v.radius {
            continue;
        }
        checked += 1;
        let inside = sigma_ball_contains(&p, v.radius, &q).unwrap_or(false);
        let expect = if inside { Convergence::Convergent } else { Convergence::Divergent };
        if v.flag != expect {
            mismatches += 1;
        }
    }
    c.at_most("series_flags_match_sigma_ball", mismatches as f64, 0.0, "series converges exactly on its σ-ball");

    let ext = sigma_ball_extension(&Quaternion::i(), 1.0, vec![Quaternion::one(); 200]).expect("positive radius");
    let q = Quaternion::new(0.0, 1.3, 0.0, 0.0);
    let expect = Quaternion::new(1.0 / 1.09, 0.3 / 1.09, 0.0, 0.0);
    c.at_most(
        "sigma_ball_extension_value",
        extend_pair_eval(&ext, &q).map_or(f64::INFINITY, |v| v.dist(&expect)),
        tol.alg,
        "sum (q - i)^n at q = 1.3i",
    );
    c.into_records()
}

fn branch(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("branch");
    let mut r = rng(seed);
    let bases: Vec<ImaginaryUnit> = std::iter::once(ImaginaryUnit::j()).chain((0..4).map(|_| random_unit(&mut r))).collect();
    let (mut minus_j, mut at_j, mut positive): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for j in &bases {
        for s in [0.0, 0.25, 0.75, 1.0] {
            let b = BranchFunction::new(*j, s);
            let v = psi_s_eval(&b, Complex64::new(0.0, -1.0)).map_or(f64::INFINITY, |v| v.dist(&e_j(j, 3f64.sqrt(), -FRAC_PI_4)));
            minus_j = minus_j.max(v);
            let sign = if s < 0.5 { -1.0 } else { 1.0 };
            let v = psi_s_eval(&b, Complex64::new(0.0, 1.0)).map_or(f64::INFINITY, |v| v.dist(&(e_j(j, 1.0, FRAC_PI_4) * sign)));
            at_j = at_j.max(v);
        }
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let b = BranchFunction::new(*j, s);
            let v = psi_s_eval(&b, Complex64::new(1.0, 0.5)).map_or(f64::INFINITY, |v| v.dist(&Quaternion::real(SQRT_2)));
            positive = positive.max(v);
        }
    }
    c.at_most("value_at_minus_j", minus_j, tol.alg, "Psi_s(-J) = sqrt(3) e^{-J pi/4}");
    c.at_most("value_at_j", at_j, tol.alg, "Psi_s(J) = -e^{J pi/4} for s < 1/2, e^{J pi/4} for s > 1/2");
    c.at_most("value_on_reference_ray", positive, tol.alg, "Psi_s(J/2 + 1) = sqrt(2)");

    let j = bases[1];
    let mut cert: f64 = 0.0;
    let mut probes = 0usize;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let b = BranchFunction::new(j, s);
        let zs: Vec<Complex64> = (0..1000).map(|_| Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0))).collect();
        let res = par::map(&zs, |z| {
            psi_s_eval(&b, *z).ok().map(|v| {
                let w = 2.0 * z - Complex64::new(0.0, 1.0);
                (v * v).dist(&embed(&j, w.re, w.im))
            })
        });
        probes += res.iter().flatten().count();
        cert = res.iter().flatten().copied().fold(cert, f64::max);
    }
    c.at_most("square_certificate", cert, tol.alg, "Psi_s(z)^2 = 2z - J off the cuts");
    c.at_least("square_certificate_probes", probes as f64, 4990.0, "probes off the cuts");

    let mut jump: f64 = 0.0;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for lambda in [0.5, 1.0, 2.0] {
            jump = jump.max(cut_jump(&BranchFunction::new(j, s), lambda, &[3, 4, 5, 6]).max_error);
        }
    }
    c.at_most("cut_jump", jump, 1e-6, "one-sided limits across the cut differ by 2 sqrt(lambda) e^{alpha J/2}");

    let xs: Vec<f64> = (0..200).map(|_| r.gen_range(-5.0..5.0)).collect();
    let real_spread = par::map(&xs, |&x| {
        let vals: Vec<Complex64> = [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&s| psi_s_raw(s, Complex64::new(x, 0.0))).collect();
        vals.iter().map(|v| (v - vals[0]).norm()).fold(0.0, f64::max)
    });
    c.at_most("real_restriction_independent_of_s", par::max_f64(&real_spread), tol.alg, "all branches agree on the real axis");

    let phi = Phi::HalfDistance;
    let f = PsiPhi::new(j, phi.clone());
    let own = BranchFunction::new(j, phi.eval(&j, &j));
    let pts: Vec<(f64, f64)> = (0..200).map(|_| (r.gen_range(-2.0..2.0), r.gen_range(0.0..2.0))).collect();
    let on_base = par::map(&pts, |&(x, y)| match (f.eval(&SlicePoint::new(j, x, y)), psi_s_eval(&own, Complex64::new(x, y))) {
        (Ok(a), Ok(b)) => a.dist(&b),
        (Err(_), Err(_)) => 0.0,
        _ => f64::INFINITY,
    });
    c.at_most("psi_phi_restriction_at_base", par::max_f64(&on_base), tol.alg, "Psi_phi on C_J is Psi_{phi(J)}");

    let i = j.orthogonal();
    let ij = i.as_quaternion() * j.as_quaternion();
    let expect = (Quaternion::one() - ij) * 0.5 * e_j(&j, 1.0, FRAC_PI_4) + (Quaternion::one() + ij) * 0.5 * e_j(&j, 3f64.sqrt(), -FRAC_PI_4);
    let v = f.eval(&SlicePoint::new(i, 0.0, 1.0)).map_or(f64::INFINITY, |v| v.dist(&expect));
    c.at_most("psi_phi_orthogonal_value", v, tol.alg, "Psi_phi(I) composed from the branch values at J and -J");
    c.into_records()
}

/// Random polylines below height 0.45, where no cut of `Psi_phi` reaches.
fn low_paths(r: &mut SeededRng, n: usize) -> Vec<ComplexPath> {
    (0..n)
        .map(|_| {
            let x0 = r.gen_range(-1.0..1.0);
            ComplexPath::new(vec![
                (x0, 0.0),
                (r.gen_range(-1.5..1.5), r.gen_range(0.0..0.45)),
                (r.gen_range(-1.5..1.5), r.gen_range(0.0..0.45)),
            ])
            .expect("valid polyline")
        })
        .collect()
}

fn counterexample(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("counterexample");
    let mut r = rng(seed);
    let j = random_unit(&mut r);
    let i = random_orthogonal(&mut r, &j);
    match counterexample_report(&j, &[i]) {
        Ok(rep) => {
            let row = &rep.rows[0];
            c.at_most("orthogonal_residual_norm", (row.residual_norm - SQRT_2).abs(), tol.alg, "classical formula residual is sqrt(2)");
            c.at_most("orthogonal_closed_form", row.gap, tol.alg, "residual equals (1 - IJ) Psi_{phi(I)}(J)");
        }
        Err(_) => c.holds("orthogonal_report", false, "report for an orthogonal unit"),
    }
    let band: Vec<ImaginaryUnit> = std::iter::repeat_with(|| random_unit(&mut r))
        .filter(|u| {
            let d = u.distance(&j);
            d > 1.0 + 1e-6 && d < 2.0 - 1e-6
        })
        .take(200)
        .collect();
    match counterexample_report(&j, &band) {
        Ok(rep) => {
            let norm_gap = rep.rows.iter().map(|row| (row.residual_norm - row.expected_norm).abs()).fold(0.0, f64::max);
            c.at_most("band_closed_form", rep.max_gap, tol.alg, "residual equals (1 - IJ) Psi_{phi(I)}(J) across the band");
            c.at_most("band_residual_norm", norm_gap, tol.alg, "residual norm equals |1 - IJ|");
            let min_inner = rep
                .rows
                .iter()
                .filter(|row| row.unit.distance(&j) <= 3f64.sqrt())
                .map(|row| row.residual_norm)
                .fold(f64::INFINITY, f64::min);
            c.at_least("residual_norm_at_least_one", min_inner, 1.0 - tol.alg, "|1 - IJ| >= 1 while |I - J| <= sqrt(3)");
            c.at_least("residual_nonzero", rep.min_residual_norm, 1e-3, "the classical formula fails across the band");
        }
        Err(_) => c.holds("band_report", false, "report over the band"),
    }
    c.holds("same_unit_rejected", matches!(counterexample_report(&j, &[j]), Err(Error::UnitOutOfBand)), "I = J is out of band");

    let f = PsiPhi::new(j, Phi::HalfDistance);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for path in low_paths(&mut r, 50) {
        let ii = random_unit(&mut r);
        let (jj, kk) = random_pair(&mut r, 0.1);
        match path_repformula(&f, &path, &ii, &jj, &kk, 256) {
            Ok(rep) => worst = worst.max(rep.max_residual),
            Err(_) => errors += 1,
        }
    }
    c.at_most("path_formula", worst, tol.check, "path formula holds for Psi_phi on contained lifts");
    c.at_most("path_formula_errors", errors as f64, 0.0, "all sampled lifts contained");

    let konst = PsiPhi::new(j, Phi::Constant { value: 0.7 });
    let mut exact: f64 = 0.0;
    for _ in 0..100 {
        let ii = random_unit(&mut r);
        let (x, y) = (r.gen_range(-1.0..1.0), r.gen_range(0.0..1.0));
        if let (Ok(fi), Ok(fj), Ok(fk)) = (
            konst.eval(&SlicePoint::new(ii, x, y)),
            konst.eval(&SlicePoint::new(j, x, y)),
            konst.eval(&SlicePoint::new(j.neg(), x, y)),
        ) {
            exact = exact.max(repformula_point(&ii, &j, &j.neg(), &fj, &fk).map_or(f64::INFINITY, |v| v.dist(&fi)));
        }
    }
    c.at_most("constant_phi_point_formula", exact, tol.check, "constant phi: the pointwise formula holds");
    c.into_records()
}

fn topology(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("topology");
    let mut r = rng(seed);
    let i = ImaginaryUnit::i();
    let ellipse = SliceSet::EllipseBook { unit: i };
    let units: Vec<ImaginaryUnit> = (0..20).map(|_| random_unit(&mut r)).collect();
    let dev = par::map(&units, |u| {
        let d = (1.0 - u.dot(&i).powi(2)).max(0.0).sqrt();
        let expect = d.sqrt().min(1.0);
        slice_inradius(&ellipse, &Quaternion::zero(), u, 1.0, tol.n_probe).map_or(f64::INFINITY, |v| (v - expect).abs())
    });
    c.at_most("ellipse_inradius", par::max_f64(&dev), 1e-3, "slice inradius at 0 is min(1, sqrt(dist(J, C_i)))");
    let j = ImaginaryUnit::j();
    let approach: Vec<f64> = (1..=10)
        .map(|n| slice_inradius(&ellipse, &Quaternion::zero(), &i.rotate_toward(&j, 0.5f64.powi(n)), 1.0, tol.n_probe).unwrap_or(f64::NAN))
        .collect();
    let monotone = approach.windows(2).all(|w| w[1] < w[0]);
    c.holds("ellipse_inradius_vanishes", monotone && approach[9] < 0.05, "inradius shrinks to 0 as J approaches i");

    let grid = default_real_grid();
    let dumbbell = SliceSet::Dumbbell { unit: i };
    c.at_least("dumbbell_real_runs", real_member_runs(&dumbbell, &grid) as f64, 2.0, "dumbbell meets the real axis in two intervals");
    c.holds("dumbbell_not_real_connected", !is_real_connected_sampled(&dumbbell, &grid), "dumbbell is not real-connected");
    let sigma = SliceSet::SigmaBall { center: Quaternion::i(), radius: 1.0 };
    let members = grid.iter().filter(|&&x| sigma.contains(&Quaternion::real(x))).count();
    c.at_most("sigma_ball_real_points", members as f64, 0.0, "Σ(i, 1) contains no real point");
    let sigma2 = SliceSet::SigmaBall { center: Quaternion::i(), radius: 2.0 };
    let small: Vec<f64> = (0..=600).map(|k| -3.0 + 0.01 * k as f64).collect();
    c.holds("sigma_ball_real_connected", is_real_connected_sampled(&sigma2, &small), "Σ(i, 2) meets the real axis in one interval");

    let ortho = i.orthogonal();
    let sections: Vec<(ImaginaryUnit, f64, f64)> = (0..8)
        .flat_map(|k| {
            let u = ortho.rotate_toward(&i.cross(&ortho).expect("orthogonal"), k as f64 * PI / 4.0);
            (0..=200).flat_map(move |a| (0..=60).map(move |b| (u, -3.013 + 0.06 * a as f64, 0.007 + 0.05 * b as f64)))
        })
        .collect();
    let bad = par::map(&sections, |(u, x, y)| {
        let q = embed(u, *x, *y);
        let expect = q.norm() < 2.0 || (q - Quaternion::real(6.0)).norm() < 2.0;
        u8::from(dumbbell.contains(&q) != expect)
    });
    c.at_most("dumbbell_orthogonal_sections", bad.iter().map(|&b| f64::from(b)).sum::<f64>(), 0.0, "sections orthogonal to i are two disks");

    let center = r.gen_range(-1.0..1.0);
    let radius = r.gen_range(0.5..2.0);
    let sb = SliceSet::SigmaBall { center: Quaternion::real(center), radius };
    let eb = SliceSet::EuclideanBall { center: Quaternion::real(center), radius };
    let probes: Vec<Quaternion> = (0..10_000).map(|_| Quaternion::real(center) + random_quaternion(&mut r, 1.2 * radius)).collect();
    let bad = par::map(&probes, |q| u8::from(sb.contains(q) != eb.contains(q)));
    c.at_most("real_sigma_ball_is_euclidean", bad.iter().map(|&b| f64::from(b)).sum::<f64>(), 0.0, "σ-ball with real center is a Euclidean ball");

    let sets = [
        ball(2.0),
        ellipse.clone(),
        dumbbell.clone(),
        sigma.clone(),
        SliceSet::RayComplement { base: j, phi: Phi::HalfDistance },
        SliceSet::RayComplementTilde { base: j, phi: Phi::HalfDistance },
        SliceSet::HalfSlice { unit: j },
    ];
    let mut unit_dependent = 0usize;
    for set in &sets {
        for _ in 0..50 {
            let x = r.gen_range(-10.0..10.0);
            let first = set.contains_coords(&random_unit(&mut r), x, 0.0);
            for _ in 0..10 {
                if set.contains_coords(&random_unit(&mut r), x, 0.0) != first {
                    unit_dependent += 1;
                }
            }
        }
    }
    c.at_most("real_membership_unit_free", unit_dependent as f64, 0.0, "membership of real points ignores the unit");

    let pts: Vec<(Quaternion, ImaginaryUnit)> = (0..10).map(|_| (random_in_ball(&mut r, 1.5), random_unit(&mut r))).collect();
    let pts: Vec<(Quaternion, ImaginaryUnit)> = pts
        .into_iter()
        .map(|(q, u)| match unit_of(&q) {
            UnitOf::Unit(v) => (q, v),
            UnitOf::Real => (q, u),
        })
        .collect();
    let rep = probe_topology(&ball(2.0), &pts, 4.0, tol.n_probe, 1e-3);
    c.holds(
        "topology_chain",
        rep.probes.len() == pts.len() && rep.slice_dominates_sigma && rep.sigma_dominates_euclidean,
        "slice inradius >= σ inradius >= Euclidean inradius",
    );
    c.into_records()
}

fn witness(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("witness");
    let mut r = rng(seed);
    let j = random_unit(&mut r);
    let tilde = SliceSet::RayComplementTilde { base: j, phi: Phi::HalfDistance };
    let path = default_witness_path();
    let kp = default_premise_unit(&j);
    let cands = default_candidates(&j, 64, 32, seed);
    let n = tol.n_path;
    c.holds("premise_lift_j", path_in_set(&tilde, &path, &j, n).contained, "lift along J stays in the set");
    c.holds("premise_lift_k", path_in_set(&tilde, &path, &kp, n).contained, "lift along K' stays in the set");
    c.at_most("premise_separation", kp.distance(&j), 0.2, "|K' - J| <= 0.2");
    match lifting_witnesses(&tilde, &path, &j, &kp, &cands, n) {
        Ok(ws) => {
            c.at_least("witness_count", ws.len() as f64, 1.0, "some lift leaves the set");
            let ortho = ws.iter().find(|w| w.unit == cands[31]);
            c.holds("orthogonal_unit_is_witness", ortho.is_some(), "the lift along I orthogonal to J leaves the set");
            let t_ok = ws.iter().all(|w| w.exit_t > 0.0 && w.exit_t <= 1.0);
            c.holds("witness_exit_parameter", t_ok, "exit parameter in (0, 1]");
        }
        Err(_) => c.holds("witness_search", false, "witness search ran"),
    }
    let b = ball(2.0);
    match lifting_witnesses(&b, &path, &j, &kp, &cands, n) {
        Ok(ws) => c.at_most("symmetric_set_witnesses", ws.len() as f64, 0.0, "axially symmetric sets contain every lift"),
        Err(_) => c.holds("symmetric_set_search", false, "witness search ran"),
    }
    let long = ComplexPath::segment((0.0, 0.0), (0.0, 3.0)).expect("valid segment");
    c.holds(
        "premise_failure_reported",
        matches!(lifting_witnesses(&b, &long, &j, &kp, &cands, 64), Err(Error::PremiseFailed)),
        "a premise lift leaving the set is an error",
    );
    c.into_records()
}

fn noise_model() -> FnModel {
    FnModel::new("per-slice noise", ball(5.0), |p| {
        let [a, b, c] = p.unit.to_array();
        let key = (a * 1e6) as i64 as u64 ^ ((b * 1e6) as i64 as u64).rotate_left(21) ^ ((c * 1e6) as i64 as u64).rotate_left(42);
        random_quaternion(&mut rng(key), 1.0)
    })
}

fn paths(seed: u64, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut c = Checks::new("paths");
    let mut r = rng(seed);
    let units: Vec<ImaginaryUnit> = (0..8).map(|_| random_unit(&mut r)).collect();
    let consistency = |m: &dyn SliceModel, path: &ComplexPath, n: usize| -> f64 {
        path_slice_consistency(m, path, &units, n).map_or(f64::INFINITY, |rep| rep.max_defect)
    };

    let mut poly: f64 = 0.0;
    for d in 0..20 {
        let m = PolynomialModel { poly: random_poly(&mut r, d % 9), domain: ball(2.0) };
        let path = ComplexPath::new(vec![(r.gen_range(-1.0..1.0), 0.0), (r.gen_range(-1.0..1.0), r.gen_range(0.0..1.0))]).expect("valid");
        poly = poly.max(consistency(&m, &path, 128));
    }
    c.at_most("polynomial_consistency", poly, tol.check, "polynomials are path-slice");

    let coeffs: Vec<Quaternion> = (0..12).map(|_| random_quaternion(&mut r, 1.0)).collect();
    let ext = ExtensionModel { ext: sigma_ball_extension(&Quaternion::zero(), 1.0, coeffs).expect("positive radius") };
    let mut e: f64 = 0.0;
    for _ in 0..10 {
        let path = ComplexPath::new(vec![(r.gen_range(-0.6..0.6), 0.0), (r.gen_range(-0.6..0.6), r.gen_range(0.0..0.6))]).expect("valid");
        e = e.max(consistency(&ext, &path, 128));
    }
    c.at_most("extension_consistency", e, tol.check, "extensions are path-slice");

    let j = random_unit(&mut r);
    let psi = PsiPhi::new(j, Phi::HalfDistance);
    let mut p: f64 = consistency(&psi, &ComplexPath::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.3)]).expect("valid"), 256);
    for path in low_paths(&mut r, 10) {
        p = p.max(consistency(&psi, &path, 256));
    }
    c.at_most("psi_phi_consistency", p, tol.check, "Psi_phi is path-slice");

    let konst = PolynomialModel { poly: Polynomial::new(vec![random_quaternion(&mut r, 1.0)]), domain: ball(5.0) };
    let seg = ComplexPath::segment((0.0, 0.0), (1.0, 0.3)).expect("valid");
    c.at_most("constant_consistency", consistency(&konst, &seg, 64), 1e-14, "constants are path-slice");
    c.at_least("noise_inconsistency", consistency(&noise_model(), &seg, 64), 0.1, "independent per-slice values are not path-slice");

    let general = ComplexPath::general(vec![(0.0, 0.0), (0.5, 0.4), (0.9, -0.3)]).expect("valid");
    let cube = PolynomialModel { poly: Polynomial::monomial(3), domain: ball(2.0) };
    c.at_most("general_path_reduction", consistency(&cube, &general, 128), tol.check, "paths dipping below the axis reduce to upper paths");

    let i = j.orthogonal();
    let pts: Vec<(f64, f64)> = (0..20).map(|k| (-1.5 + 0.15 * k as f64, 0.05)).collect();
    let off = continuity_probe(&psi, &i, &pts, &[1e-3, 1e-4], 2.0);
    c.at_most("continuity_off_cut", off.max_ratio, off.bound, "finite differences bounded away from the cut");
    // the cut of an orthogonal unit meets height 0.8 near x = -0.101
    let near = continuity_probe(&psi, &i, &[(-0.09, 0.8)], &[0.05], 2.0);
    c.at_least("jump_near_cut", near.max_ratio, 10.0, "difference quotients blow up across the cut");
    c.into_records()
}
