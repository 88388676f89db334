use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use drsplit_core::nalgebra::DMatrix;
use drsplit_core::{fixtures, ConvexFunction, LinearSubspace, Point, Tolerances, Variant};

fn operator_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("dr_operator");
    for (name, problem, x) in [
        (
            "quadratic_affine",
            fixtures::quadratic_affine(),
            Point::from([1.0, 1.0, 1.0]),
        ),
        ("epigraph_drift", fixtures::epigraph_drift(), Point::from([0.5, 0.0])),
        ("tilted_distance", fixtures::tilted_distance(), Point::from([0.0, 2.0])),
    ] {
        group.bench_function(name, |b| b.iter(|| problem.dr_operator(black_box(&x)).unwrap()));
    }
    group.finish();
}

fn solves(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("iterate");
    for (name, problem, x0) in [
        (
            "quadratic_affine",
            fixtures::quadratic_affine(),
            Point::from([1.0, 1.0, 1.0]),
        ),
        (
            "feasibility_line",
            fixtures::feasibility_line(),
            Point::from([2.0, 0.0]),
        ),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| {
                problem
                    .iterate(black_box(&x0), &tol, 10_000, Variant::Standard)
                    .unwrap()
            })
        });
    }
    let tilted = fixtures::tilted_distance();
    let x0 = Point::from([0.0, 2.0]);
    group.sample_size(20);
    group.bench_function("tilted_distance_10k", |b| {
        b.iter(|| tilted.iterate(black_box(&x0), &tol, 10_000, Variant::Standard).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("run_parallel");
    for (name, pp) in [
        ("singleton_pair", fixtures::singleton_pair()),
        ("halfspaces_with_quadratic", fixtures::halfspaces_with_quadratic()),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| pp.run_parallel(black_box(&Point::zeros(2)), &tol, 10_000).unwrap())
        });
    }
    group.finish();
}

fn prox_by_dimension(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadratic_prox");
    for dim in [2usize, 16, 128] {
        let a = DMatrix::from_fn(dim, dim, |i, j| ((i * 7 + j * 3) % 11) as f64 / 11.0);
        let g = ConvexFunction::quadratic(&a * a.transpose(), Point::zeros(dim)).unwrap();
        let x = Point::from(vec![1.0; dim]);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &x, |b, x| {
            b.iter(|| g.prox(black_box(x)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("subspace_projection");
    for dim in [2usize, 16, 128] {
        let raw: Vec<Point> = (0..dim / 2)
            .map(|k| Point::from((0..dim).map(|i| ((i + 1) * (k + 2) % 13) as f64).collect::<Vec<_>>()))
            .collect();
        let u = LinearSubspace::span(dim, &raw).unwrap();
        let x = Point::from(vec![1.0; dim]);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &x, |b, x| {
            b.iter(|| u.project(black_box(x)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, operator_steps, solves, prox_by_dimension);
criterion_main!(benches);
