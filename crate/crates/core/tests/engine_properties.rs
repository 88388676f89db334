mod common;

use common::{point, problem, rng};
use drsplit_core::{fixtures, Outcome, Point, Problem, Tolerances, Variant};

#[test]
fn operator_is_firmly_nonexpansive() {
    let mut rng = rng(21);
    for _ in 0..200 {
        let p = problem(&mut rng);
        for _ in 0..20 {
            let x = point(&mut rng, p.dim(), 3.0);
            let y = point(&mut rng, p.dim(), 3.0);
            let d = p.dr_operator(&x).unwrap() - p.dr_operator(&y).unwrap();
            let xy = &x - &y;
            assert!(d.norm() <= xy.norm() + 1e-12);
            assert!(d.norm_squared() <= d.dot(&xy) + 1e-10);
        }
    }
}

#[test]
fn switched_operator_conjugates_by_reflection() {
    let mut rng = rng(22);
    for _ in 0..50 {
        let p = problem(&mut rng);
        let x = point(&mut rng, p.dim(), 3.0);
        let u = p.subspace();
        let mut standard = u.reflect(&x).unwrap();
        let mut switched = x.clone();
        for n in 1..=100 {
            standard = p.dr_operator(&standard).unwrap();
            switched = p.dr_operator_switched(&switched).unwrap();
            let gap = u.project(&switched).unwrap().distance(&u.project(&standard).unwrap());
            assert!(gap <= 1e-10 * (1.0 + n as f64), "n = {n}: {gap}");
        }
    }
}

#[test]
fn prox_point_identity_holds_along_traces() {
    let mut rng = rng(23);
    for _ in 0..30 {
        let p = problem(&mut rng);
        let x = point(&mut rng, p.dim(), 3.0);
        let report = p.iterate(&x, &Tolerances::default(), 60, Variant::Standard).unwrap();
        for pair in report.trace.entries().windows(2) {
            let identity = &pair[1].governing - &pair[0].governing + &pair[0].shadow;
            let scale = 1.0 + pair[1].governing.norm();
            assert!(identity.distance(&pair[0].prox_point) <= 1e-12 * scale);
        }
    }
}

fn governing(p: &Problem, x0: &Point, n: usize) -> Vec<Point> {
    let mut out = vec![x0.clone()];
    for _ in 0..n {
        let next = p.dr_operator(out.last().unwrap()).unwrap();
        out.push(next);
    }
    out
}

/// Fixtures with known `v` and a known `y` with `y = T(y + v)`.
fn fejer_fixtures() -> Vec<(&'static str, Problem, Point, Point, Point)> {
    vec![
        (
            "quadratic_affine",
            fixtures::quadratic_affine(),
            Point::from([1.0, 1.0, 1.0]),
            Point::from([0.0, 0.0, 1.0]),
            Point::from([0.0, -1.0, 0.0]),
        ),
        (
            "tilted_distance",
            fixtures::tilted_distance(),
            Point::from([0.0, 2.0]),
            Point::from([1.0, 0.0]),
            Point::from([0.0, 0.0]),
        ),
        (
            "feasibility_line",
            fixtures::feasibility_line(),
            Point::from([2.0, 0.0]),
            Point::from([0.0, -1.0]),
            Point::from([0.0, 0.0]),
        ),
        (
            "epigraph_drift",
            fixtures::epigraph_drift(),
            Point::from([0.5, 0.0]),
            Point::from([0.0, -1.0]),
            Point::from([0.0, 1.0]),
        ),
    ]
}

#[test]
fn supplied_points_are_fixed_points_of_the_shifted_operator() {
    for (name, p, _, v, y) in fejer_fixtures() {
        let shifted = p.dr_operator(&(&y + &v)).unwrap();
        assert!(shifted.distance(&y) <= 1e-12, "{name}");
    }
}

#[test]
fn shadow_steps_vanish_on_solvable_fixtures() {
    for (name, p, x0, _, _) in fejer_fixtures().into_iter().filter(|f| f.0 != "tilted_distance") {
        let iterates = governing(&p, &x0, 300);
        let u = p.subspace();
        let last = u
            .project(&iterates[300])
            .unwrap()
            .distance(&u.project(&iterates[299]).unwrap());
        assert!(last <= 1e-12, "{name}: {last}");
    }
}

#[test]
fn normal_solution_gap_is_orthogonal_to_the_subspace() {
    let tol = Tolerances::default();
    for (name, p, x0) in [
        (
            "feasibility_line",
            fixtures::feasibility_line(),
            Point::from([2.0, 0.0]),
        ),
        ("epigraph_drift", fixtures::epigraph_drift(), Point::from([0.5, 0.0])),
        (
            "quadratic_affine",
            fixtures::quadratic_affine(),
            Point::from([1.0, 1.0, 1.0]),
        ),
    ] {
        let report = p.iterate(&x0, &tol, 10_000, Variant::Standard).unwrap();
        assert_eq!(report.outcome, Outcome::NormalSolution, "{name}");
        assert!(report.gap_in_subspace <= 1e-6, "{name}");
        let z = report.shadow_limit.unwrap();
        assert!(p.subspace().project_complement(&z).unwrap().norm() <= 1e-6, "{name}");
        let last_prox = &report.trace.last().unwrap().prox_point;
        assert!(last_prox.distance(&(&z - &report.v_hat)) <= 1e-6, "{name}");
    }
}

#[test]
fn switched_run_agrees_with_standard_run() {
    let p = fixtures::feasibility_line();
    let tol = Tolerances::default();
    let x0 = Point::from([2.0, 0.0]);
    let standard = p.iterate(&x0, &tol, 1000, Variant::Standard).unwrap();
    let switched = p
        .iterate(&p.subspace().reflect(&x0).unwrap(), &tol, 1000, Variant::Switched)
        .unwrap();
    assert_eq!(switched.outcome, Outcome::NormalSolution);
    assert!(switched.v_hat.distance(&standard.v_hat) <= 1e-8);
    assert!(switched.shadow_limit.unwrap().distance(&standard.shadow_limit.unwrap()) <= 1e-8);
}
