//! Acceptance criteria, one line each. Expected values come from the small
//! quaternion oracle below (plain arrays, written independently of the
//! library) or from closed forms.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

use slicelab::extension::{extend_pair_eval, ExtendedFunction, HolomorphicSliceData};
use slicelab::geometry::{default_real_grid, is_real_connected_sampled, path_in_set, slice_inradius, Phi, SliceSet};
use slicelab::path::ComplexPath;
use slicelab::pathslice::{
    counterexample_report, default_candidates, default_premise_unit, default_witness_path, lifting_witnesses,
    path_repformula, psi_s_eval, BranchFunction, PolynomialModel, PsiPhi,
};
use slicelab::quaternion::{interp_matrix_inv, ImaginaryUnit, InterpMatrix, Quaternion};
use slicelab::sampling::{random_in_ball, random_pair, random_quaternion, random_rational_unit, random_unit, rng};
use slicelab::slicefn::{random_triples, repformula_point, Polynomial};

type Q = [f64; 4];

fn mul(a: Q, b: Q) -> Q {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}
fn add(a: Q, b: Q) -> Q {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}
fn sub(a: Q, b: Q) -> Q {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}
fn scale(a: Q, s: f64) -> Q {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}
fn norm(a: Q) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]).sqrt()
}
fn inv(a: Q) -> Q {
    let n2 = norm(a).powi(2);
    [a[0] / n2, -a[1] / n2, -a[2] / n2, -a[3] / n2]
}
fn dist(a: Q, b: Q) -> f64 {
    norm(sub(a, b))
}
fn unit(u: &ImaginaryUnit) -> Q {
    let [x, y, z] = u.to_array();
    [0.0, x, y, z]
}
/// `x + yI`.
fn at(u: &ImaginaryUnit, x: f64, y: f64) -> Q {
    add([x, 0.0, 0.0, 0.0], scale(unit(u), y))
}
/// `r e^{theta I}`.
fn polar(u: &ImaginaryUnit, r: f64, theta: f64) -> Q {
    at(u, r * theta.cos(), r * theta.sin())
}
fn lib(q: &Quaternion) -> Q {
    q.to_array()
}
/// `sum q^n a_n`.
fn poly_oracle(coeffs: &[Q], q: Q) -> Q {
    let mut acc = [0.0; 4];
    let mut pw = [1.0, 0.0, 0.0, 0.0];
    for a in coeffs {
        acc = add(acc, mul(pw, *a));
        pw = mul(pw, q);
    }
    acc
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(11);
    let mut inv_dev: f64 = 0.0;
    let mut jk: f64 = 0.0;
    for _ in 0..1000 {
        let (j, k) = random_pair(&mut r, 0.1);
        let m = interp_matrix_inv(&j, &k).expect("separated pair");
        let (a, b, c, d) = (lib(&m.m11), lib(&m.m12), lib(&m.m21), lib(&m.m22));
        let (jq, kq) = (unit(&j), unit(&k));
        let one = [1.0, 0.0, 0.0, 0.0];
        // inverse times [[1, J], [1, K]]
        let p11 = add(a, b);
        let p12 = add(mul(a, jq), mul(b, kq));
        let p21 = add(c, d);
        let p22 = add(mul(c, jq), mul(d, kq));
        for (p, e) in [(p11, one), (p12, [0.0; 4]), (p21, [0.0; 4]), (p22, one)] {
            inv_dev = inv_dev.max(dist(p, e));
        }
        let dinv = inv(sub(jq, kq));
        jk = jk.max(norm(add(mul(dinv, jq), mul(kq, dinv))));
    }
    let mut exact_failures = 0;
    for _ in 0..100 {
        let j = random_rational_unit(&mut r);
        let mut k = random_rational_unit(&mut r);
        while k == j {
            k = random_rational_unit(&mut r);
        }
        let m = interp_matrix_inv(&j, &k).expect("distinct rational units");
        if m.matmul(&InterpMatrix::vandermonde(&j, &k)) != InterpMatrix::identity() {
            exact_failures += 1;
        }
        let (jq, kq) = (j.as_quaternion(), k.as_quaternion());
        let d = (&jq - &kq).inverse_with(0.0).expect("nonzero");
        if &(&d * &jq) + &(&kq * &d) != Quaternion::zero() {
            exact_failures += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: inv_dev <= 1e-12 && jk <= 1e-12 && exact_failures == 0 && within(t, 1.0),
        detail: format!(
            "inverse deviation {inv_dev:.2e}, jk identity {jk:.2e} (tol 1e-12), rational failures {exact_failures}/100, {:.3}s (limit 1s)",
            t.as_secs_f64()
        ),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(12);
    let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
    let triples = random_triples(&mut r, &ball, 1000, 2.0, 0.1);
    let mut point: f64 = 0.0;
    for (n, t) in triples.iter().enumerate() {
        let coeffs: Vec<Q> = (0..=n % 9).map(|_| lib(&random_quaternion(&mut r, 1.0))).collect();
        let f = |u: &ImaginaryUnit| poly_oracle(&coeffs, at(u, t.x, t.y));
        let rhs = repformula_point(&t.i, &t.j, &t.k, &Quaternion::from_array(f(&t.j)), &Quaternion::from_array(f(&t.k)))
            .expect("separated pair");
        point = point.max(dist(lib(&rhs), f(&t.i)));
    }
    let mut path_res: f64 = 0.0;
    let mut path_errors = 0;
    for n in 0..50 {
        let coeffs: Vec<Q> = (0..=n % 9).map(|_| lib(&random_quaternion(&mut r, 1.0))).collect();
        let model = PolynomialModel {
            poly: Polynomial::new(coeffs.iter().map(|a| Quaternion::from_array(*a)).collect()),
            domain: ball.clone(),
        };
        let path = ComplexPath::new(vec![
            (r.gen_range(-1.0..1.0), 0.0),
            (r.gen_range(-1.0..1.0), r.gen_range(0.0..1.0)),
            (r.gen_range(-1.0..1.0), r.gen_range(0.0..1.0)),
        ])
        .expect("valid polyline");
        let i = random_unit(&mut r);
        let (j, k) = random_pair(&mut r, 0.1);
        match path_repformula(&model, &path, &i, &j, &k, 128) {
            Ok(rep) => {
                for (t, rhs) in rep.params.iter().zip(&rep.formula) {
                    let (x, y) = path.point_at(*t);
                    path_res = path_res.max(dist(lib(rhs), poly_oracle(&coeffs, at(&i, x, y))));
                }
            }
            Err(_) => path_errors += 1,
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: triples.len() == 1000 && point <= 1e-10 && path_res <= 1e-10 && path_errors == 0 && within(t, 5.0),
        detail: format!(
            "{} triples max {point:.2e}, 50 paths max {path_res:.2e} (tol 1e-10), {path_errors} lift errors, {:.3}s (limit 5s)",
            triples.len(),
            t.as_secs_f64()
        ),
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut r = rng(13);
    let u = random_unit(&mut r);
    let z0 = Complex64::new(0.0, 0.0);
    let (mut coherence, mut cr): (f64, f64) = (0.0, 0.0);
    let h = 1e-4;
    for k in 0..=8usize {
        let mut coeffs = vec![Quaternion::zero(); k + 1];
        coeffs[k] = Quaternion::one();
        let ext = ExtendedFunction::new(
            HolomorphicSliceData::series(u, z0, 1.0, coeffs.clone()).unwrap(),
            HolomorphicSliceData::series(u.neg(), z0, 1.0, coeffs).unwrap(),
        )
        .unwrap();
        for _ in 0..500 {
            let q = random_in_ball(&mut r, 0.99);
            let mut pw = [1.0, 0.0, 0.0, 0.0];
            for _ in 0..k {
                pw = mul(pw, lib(&q));
            }
            let v = extend_pair_eval(&ext, &q).map_or(f64::INFINITY, |v| dist(lib(&v), pw));
            coherence = coherence.max(v);
        }
        for _ in 0..20 {
            let j = random_unit(&mut r);
            let (x, y) = (r.gen_range(-0.6..0.6), r.gen_range(0.05..0.6));
            let f = |x: f64, y: f64| lib(&extend_pair_eval(&ext, &Quaternion::from_array(at(&j, x, y))).unwrap());
            let dx = scale(sub(f(x + h, y), f(x - h, y)), 0.5 / h);
            let dy = scale(sub(f(x, y + h), f(x, y - h)), 0.5 / h);
            cr = cr.max(norm(scale(add(dx, mul(unit(&j), dy)), 0.5)));
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: coherence <= 1e-10 && cr <= 1e-6 && within(t, 5.0),
        detail: format!(
            "z^k -> q^k max {coherence:.2e} (tol 1e-10) over 9 x 500 probes, CR residual {cr:.2e} (tol 1e-6), {:.3}s (limit 5s)",
            t.as_secs_f64()
        ),
    }
}

fn criterion_4() -> Outcome {
    let mut r = rng(14);
    let mut worst: f64 = 0.0;
    for j in std::iter::once(ImaginaryUnit::j()).chain((0..9).map(|_| random_unit(&mut r))) {
        for s in [0.0, 0.25, 0.75, 1.0] {
            let b = BranchFunction::new(j, s);
            let ev = |x: f64, y: f64| psi_s_eval(&b, Complex64::new(x, y)).map_or([f64::NAN; 4], |v| lib(&v));
            let sign = if s < 0.5 { -1.0 } else { 1.0 };
            worst = worst
                .max(dist(ev(0.0, -1.0), polar(&j, 3f64.sqrt(), -FRAC_PI_4)))
                .max(dist(ev(0.0, 1.0), scale(polar(&j, 1.0, FRAC_PI_4), sign)))
                .max(dist(ev(1.0, 0.5), [SQRT_2, 0.0, 0.0, 0.0]));
        }
    }
    Outcome { pass: worst <= 1e-12, detail: format!("max deviation {worst:.2e} over 10 bases x 4 values of s (tol 1e-12)") }
}

fn criterion_5() -> Outcome {
    let mut r = rng(15);
    let (mut norm_gap, mut closed_gap, mut path_res): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut errors = 0;
    for _ in 0..10 {
        let j = random_unit(&mut r);
        let o = j.orthogonal();
        let i = o.rotate_toward(&j.cross(&o).unwrap(), r.gen_range(0.0..2.0 * PI));
        let rep = counterexample_report(&j, &[i]).expect("orthogonal unit is in band");
        let res = lib(&rep.rows[0].residual);
        norm_gap = norm_gap.max((norm(res) - SQRT_2).abs());
        // phi(I) = sqrt(2)/2 > 1/2, so Psi_{phi(I)}(J) = e^{J pi/4}
        let one = [1.0, 0.0, 0.0, 0.0];
        let closed = mul(sub(one, mul(unit(&i), unit(&j))), polar(&j, 1.0, FRAC_PI_4));
        closed_gap = closed_gap.max(dist(res, closed));
        let f = PsiPhi::new(j, Phi::HalfDistance);
        for _ in 0..5 {
            let path = ComplexPath::new(vec![
                (r.gen_range(-1.0..1.0), 0.0),
                (r.gen_range(-1.5..1.5), r.gen_range(0.0..0.45)),
                (r.gen_range(-1.5..1.5), r.gen_range(0.0..0.45)),
            ])
            .unwrap();
            let ii = random_unit(&mut r);
            let (jj, kk) = random_pair(&mut r, 0.1);
            match path_repformula(&f, &path, &ii, &jj, &kk, 256) {
                Ok(rep) => path_res = path_res.max(rep.max_residual),
                Err(_) => errors += 1,
            }
        }
    }
    Outcome {
        pass: norm_gap <= 1e-12 && closed_gap <= 1e-12 && path_res <= 1e-9 && errors == 0,
        detail: format!(
            "| |residual| - sqrt 2 | {norm_gap:.2e}, gap to (1-IJ)e^(J pi/4) {closed_gap:.2e} (tol 1e-12), path formula {path_res:.2e} (tol 1e-9) on 50 paths"
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut r = rng(16);
    let mut worst: f64 = 0.0;
    for j in [ImaginaryUnit::j(), random_unit(&mut r)] {
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let b = BranchFunction::new(j, s);
            let alpha = FRAC_PI_4 + s * FRAC_PI_2;
            for lambda in [0.5, 1.0, 2.0] {
                // J/2 + (lambda/2) e^{theta J} sits at |2z - J| = lambda
                let ev = |theta: f64| {
                    let z = Complex64::new(0.0, 0.5) + Complex64::from_polar(0.5 * lambda, theta);
                    lib(&psi_s_eval(&b, z).expect("off the cut"))
                };
                let expect = polar(&j, 2.0 * lambda.sqrt(), alpha / 2.0);
                for m in 3..=6 {
                    let d = 10f64.powi(-m);
                    worst = worst.max(dist(sub(ev(alpha - d), ev(alpha + d)), expect));
                }
            }
        }
    }
    Outcome { pass: worst <= 1e-6, detail: format!("max jump error {worst:.2e} for lambda in {{0.5, 1, 2}}, all s, m = 3..6 (tol 1e-6)") }
}

/// Distance from a unit `J` to the plane spanned by 1 and `i`, by golden-section search.
fn distance_to_plane(j: &ImaginaryUnit) -> f64 {
    let jq = unit(j);
    let f = |b: f64| dist(jq, [0.0, b, 0.0, 0.0]);
    let (mut lo, mut hi) = (-2.0, 2.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

fn criterion_7() -> Outcome {
    let mut r = rng(17);
    let i = ImaginaryUnit::i();
    let ellipse = SliceSet::EllipseBook { unit: i };
    let (mut dev, mut literal): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let j = random_unit(&mut r);
        let d = distance_to_plane(&j);
        let rho = slice_inradius(&ellipse, &Quaternion::zero(), &j, 1.0, 64).expect("0 is in the set");
        // the section is x^2 + y^2/d < 1, whose y semi-axis is sqrt(d)
        dev = dev.max((rho - d.sqrt().min(1.0)).abs());
        literal = literal.max((rho - d.min(1.0)).abs());
    }
    let grid = default_real_grid();
    let dumbbell_split = !is_real_connected_sampled(&SliceSet::Dumbbell { unit: i }, &grid);
    let sigma = SliceSet::SigmaBall { center: Quaternion::i(), radius: 1.0 };
    let real_members = grid.iter().filter(|&&x| sigma.contains(&Quaternion::real(x))).count();
    Outcome {
        pass: dev <= 1e-3 && dumbbell_split && real_members == 0,
        detail: format!(
            "inradius vs min(1, sqrt(dist)) {dev:.2e} (tol 1e-3; against min(1, dist) without the root: {literal:.2e}), dumbbell real-disconnected {dumbbell_split}, real points in Σ(i,1): {real_members}"
        ),
    }
}

fn criterion_8() -> Outcome {
    let j = ImaginaryUnit::j();
    let set = SliceSet::RayComplementTilde { base: j, phi: Phi::HalfDistance };
    let path = default_witness_path();
    let kp = default_premise_unit(&j);
    let cands = default_candidates(&j, 64, 32, 1);
    let premises = path_in_set(&set, &path, &j, 1024).contained && path_in_set(&set, &path, &kp, 1024).contained;
    let ws = lifting_witnesses(&set, &path, &j, &kp, &cands, 1024).unwrap_or_default();
    let exits = ws.iter().all(|w| !path_in_set(&set, &path, &w.unit, 1024).contained);
    // for I orthogonal to J the cut leaves (0, 1/2) at angle pi/4 + (sqrt(2)/2)(pi/2)
    // and meets the last segment at height 0.784
    let alpha = FRAC_PI_4 + SQRT_2 / 2.0 * FRAC_PI_2;
    let x_hit = (0.784 - 0.5) / alpha.tan();
    let t_oracle = (0.2 + 0.784 + (x_hit + 0.2)) / (0.2 + 0.784 + 0.15);
    let ortho = ws.iter().find(|w| w.unit.dot(&j).abs() < 1e-12);
    let t_gap = ortho.map_or(f64::INFINITY, |w| (w.exit_t - t_oracle).abs());
    let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
    let none = lifting_witnesses(&ball, &path, &j, &kp, &cands, 1024).map(|w| w.is_empty()).unwrap_or(false);
    Outcome {
        pass: premises && !ws.is_empty() && exits && t_gap < 1e-6 && none,
        detail: format!(
            "premises contained {premises}, {} witnesses of {} candidates, orthogonal exit t gap {t_gap:.1e}, ball gives none {none}",
            ws.len(),
            cands.len()
        ),
    }
}

fn strip_timestamp(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).expect("json report");
    v.as_object_mut().expect("object").remove("timestamp");
    v
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_slicelab");
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["verify", "--suite", "all", "--seed", "42"]);
        if let Some(t) = threads {
            cmd.env("SLICELAB_THREADS", t);
        }
        let start = Instant::now();
        let out = cmd.output().expect("binary runs");
        (out.status.code(), String::from_utf8(out.stdout).expect("utf8"), start.elapsed())
    };
    let (c1, a, t1) = run(None);
    let (c2, b, _) = run(None);
    let (c3, single, _) = run(Some("1"));
    let blank = |s: &str| s.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n");
    let identical = blank(&a) == blank(&b) && strip_timestamp(&a) == strip_timestamp(&b);
    let thread_free = blank(&a) == blank(&single);
    Outcome {
        pass: c1 == Some(0) && c2 == Some(0) && c3 == Some(0) && identical && thread_free && within(t1, 60.0),
        detail: format!(
            "exit codes {c1:?}/{c2:?}/{c3:?}, identical reports {identical}, same with one thread {thread_free}, full suite {:.2}s (limit 60s)",
            t1.as_secs_f64()
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("algebra identities", criterion_1),
        ("representation formula", criterion_2),
        ("extension coherence", criterion_3),
        ("branch values", criterion_4),
        ("counterexample", criterion_5),
        ("cut jump", criterion_6),
        ("topology evidence", criterion_7),
        ("lifting witness", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {name}: {} ({})", n + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
