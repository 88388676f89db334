//! Seeded random problem generators shared by integration tests.
#![allow(dead_code)]

use drsplit_core::nalgebra::DMatrix;
use drsplit_core::{ConvexFunction, LinearSubspace, Point, Problem};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn point(rng: &mut TestRng, dim: usize, scale: f64) -> Point {
    Point::from((0..dim).map(|_| rng.gen_range(-scale..scale)).collect::<Vec<_>>())
}

/// Span of `k` random vectors (rank `k` with probability one).
pub fn subspace(rng: &mut TestRng, dim: usize, k: usize) -> LinearSubspace {
    let raw: Vec<Point> = (0..k).map(|_| point(rng, dim, 1.0)).collect();
    LinearSubspace::span(dim, &raw).expect("random span")
}

pub fn any_subspace(rng: &mut TestRng, dim: usize) -> LinearSubspace {
    let k = rng.gen_range(0..=dim);
    subspace(rng, dim, k)
}

/// Names of the catalog variants available in dimension `dim`.
pub fn variants(dim: usize) -> Vec<&'static str> {
    let mut names = vec![
        "subspace",
        "affine",
        "halfspace",
        "ball",
        "singleton",
        "box",
        "quadratic",
        "tilted",
        "quadratic_affine",
        "translate",
    ];
    if dim == 2 {
        names.push("epigraph");
    }
    names
}

pub fn function(rng: &mut TestRng, dim: usize, variant: &str) -> ConvexFunction {
    match variant {
        "subspace" => ConvexFunction::IndicatorSubspace(any_subspace(rng, dim)),
        "affine" => {
            let k = rng.gen_range(0..dim);
            ConvexFunction::indicator_affine(point(rng, dim, 1.0), subspace(rng, dim, k)).unwrap()
        }
        "halfspace" => {
            let normal = point(rng, dim, 1.0);
            ConvexFunction::indicator_halfspace(normal, rng.gen_range(-1.0..1.0)).unwrap()
        }
        "ball" => ConvexFunction::indicator_ball(point(rng, dim, 1.0), rng.gen_range(0.1..1.5)).unwrap(),
        "singleton" => ConvexFunction::IndicatorSingleton(point(rng, dim, 1.0)),
        "box" => {
            let a = point(rng, dim, 1.0);
            let b = point(rng, dim, 1.0);
            let lo = Point::from(
                a.coords()
                    .iter()
                    .zip(b.coords())
                    .map(|(x, y)| x.min(*y))
                    .collect::<Vec<_>>(),
            );
            let hi = Point::from(
                a.coords()
                    .iter()
                    .zip(b.coords())
                    .map(|(x, y)| x.max(*y))
                    .collect::<Vec<_>>(),
            );
            ConvexFunction::indicator_box(lo, hi).unwrap()
        }
        "epigraph" => {
            ConvexFunction::indicator_epigraph_abs(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0)).unwrap()
        }
        "quadratic" => {
            let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
            let q = &a * a.transpose();
            ConvexFunction::quadratic(q, point(rng, dim, 1.0)).unwrap()
        }
        "tilted" => ConvexFunction::tilted_squared_distance(any_subspace(rng, dim), point(rng, dim, 1.0)).unwrap(),
        "quadratic_affine" => {
            let k = rng.gen_range(0..=dim);
            let w_space = subspace(rng, dim, k);
            let w = w_space.project(&point(rng, dim, 1.0)).unwrap();
            let b = w_space.project_complement(&point(rng, dim, 1.0)).unwrap();
            ConvexFunction::quadratic_affine_restricted(w, b, w_space).unwrap()
        }
        "translate" => {
            let inner_variant = ["ball", "halfspace", "quadratic", "affine"][rng.gen_range(0..4)];
            let inner = function(rng, dim, inner_variant);
            ConvexFunction::translate(inner, point(rng, dim, 1.0)).unwrap()
        }
        other => panic!("unknown variant {other}"),
    }
}

/// A random problem: random subspace and a random catalog function.
pub fn problem(rng: &mut TestRng) -> Problem {
    let dim = rng.gen_range(1..=4);
    let names = variants(dim);
    let variant = names[rng.gen_range(0..names.len())];
    let g = function(rng, dim, variant);
    Problem::new(any_subspace(rng, dim), g).unwrap()
}

/// A point of `dom g`: the domain projection of a random point.
pub fn domain_point(rng: &mut TestRng, g: &ConvexFunction, scale: f64) -> Point {
    g.domain_projection(&point(rng, g.dim(), scale)).unwrap()
}
