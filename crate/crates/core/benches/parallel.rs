use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use slicelab::geometry::{path_in_set, Phi, SliceSet};
use slicelab::par;
use slicelab::pathslice::default_witness_path;
use slicelab::quaternion::{ImaginaryUnit, Quaternion};
use slicelab::sampling::{random_quaternion, random_unit, rng};
use slicelab::slicefn::{random_triples, repformula_point, Polynomial};

fn formula_residuals(c: &mut Criterion) {
    let mut r = rng(1);
    let ball = SliceSet::EuclideanBall { center: Quaternion::zero(), radius: 2.0 };
    let triples = random_triples(&mut r, &ball, 20_000, 2.0, 0.1);
    let poly = Polynomial::new((0..9).map(|_| random_quaternion(&mut r, 1.0)).collect());
    let residual = |t: &slicelab::slicefn::SliceSampleTriple| {
        let [pi, pj, pk] = t.points();
        let rhs = repformula_point(&t.i, &t.j, &t.k, &poly.eval(&pj.to_quaternion()), &poly.eval(&pk.to_quaternion()));
        rhs.map_or(f64::NAN, |v| v.dist(&poly.eval(&pi.to_quaternion())))
    };
    let mut g = c.benchmark_group("formula_residuals");
    g.bench_function(BenchmarkId::new("parallel", triples.len()), |b| b.iter(|| par::map(black_box(&triples), residual)));
    g.bench_function(BenchmarkId::new("sequential", triples.len()), |b| b.iter(|| par::map_seq(black_box(&triples), residual)));
    g.finish();
}

fn lift_containment(c: &mut Criterion) {
    let mut r = rng(2);
    let j = ImaginaryUnit::j();
    let set = SliceSet::RayComplementTilde { base: j, phi: Phi::HalfDistance };
    let path = default_witness_path();
    let units: Vec<ImaginaryUnit> = (0..4096).map(|_| random_unit(&mut r)).collect();
    let probe = |u: &ImaginaryUnit| path_in_set(&set, &path, u, 1024).contained;
    let mut g = c.benchmark_group("lift_containment");
    g.bench_function(BenchmarkId::new("parallel", units.len()), |b| b.iter(|| par::map(black_box(&units), probe)));
    g.bench_function(BenchmarkId::new("sequential", units.len()), |b| b.iter(|| par::map_seq(black_box(&units), probe)));
    g.finish();
}

criterion_group!(benches, formula_residuals, lift_containment);
criterion_main!(benches);
