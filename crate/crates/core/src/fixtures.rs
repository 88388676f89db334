//! Small problems with known closed-form behaviour, shared by tests,
//! benchmarks and the example problem files.

use nalgebra::DMatrix;

use crate::engine::Problem;
use crate::functions::ConvexFunction;
use crate::point::Point;
use crate::product::ProductProblem;
use crate::subspace::LinearSubspace;

/// `R^3`, `U = span{e1}`, `g = ½‖·‖² + ⟨e2, ·⟩ + ι_{−e3 + span{e2}}`.
///
/// Gap vector `e3`, normal solutions `{0}`, optimal value `½`.
pub fn quadratic_affine() -> Problem {
    let g = ConvexFunction::quadratic_affine_restricted(
        Point::unit(3, 1),
        Point::unit(3, 2),
        LinearSubspace::coordinate(3, &[1]),
    )
    .expect("valid fixture");
    Problem::new(LinearSubspace::coordinate(3, &[0]), g).expect("valid fixture")
}

/// `R^2`, `U = R × {0}`, `g = ½ dist_U² + ⟨(1, 0), ·⟩`.
///
/// The constraint qualification fails: the gap vector `(1, 0)` lies in `U`
/// and the shadow drifts to infinity.
pub fn tilted_distance() -> Problem {
    let u = LinearSubspace::coordinate(2, &[0]);
    let g = ConvexFunction::tilted_squared_distance(u.clone(), Point::from([1.0, 0.0])).expect("valid fixture");
    Problem::new(u, g).expect("valid fixture")
}

/// `R^2`, `U = R × {0}`, `g = ι_{R × {1}}`. Gap vector `(0, −1)`, `Z = U`.
pub fn feasibility_line() -> Problem {
    let u = LinearSubspace::coordinate(2, &[0]);
    let g = ConvexFunction::indicator_affine(Point::from([0.0, 1.0]), u.clone()).expect("valid fixture");
    Problem::new(u, g).expect("valid fixture")
}

/// `R^2`, `U = R × {0}`, `g = ι_C` with `C = epi(|·| + 1)`. Gap vector
/// `(0, −1)`, `Z = {0}`; from `[−1, 1] × {0}` the iterates are `(0, n)`.
pub fn epigraph_drift() -> Problem {
    let g = ConvexFunction::indicator_epigraph_abs(1.0, 1.0).expect("valid fixture");
    Problem::new(LinearSubspace::coordinate(2, &[0]), g).expect("valid fixture")
}

/// `U = R^2`, `g = ½‖·‖²`; solvable with minimizer `0`.
pub fn consistent_quadratic() -> Problem {
    let g = ConvexFunction::quadratic(DMatrix::identity(2, 2), Point::zeros(2)).expect("valid fixture");
    Problem::new(LinearSubspace::full(2), g).expect("valid fixture")
}

/// `ι_{(−1, 0)}` and `ι_{(1, 0)}`.
pub fn singleton_pair() -> ProductProblem {
    ProductProblem::new(vec![
        ConvexFunction::IndicatorSingleton(Point::from([-1.0, 0.0])),
        ConvexFunction::IndicatorSingleton(Point::from([1.0, 0.0])),
    ])
    .expect("valid fixture")
}

/// `ι_{x1 ≤ −1}`, `ι_{x1 ≥ 1}` and `½‖· − (3, 2)‖²`.
pub fn halfspaces_with_quadratic() -> ProductProblem {
    let target = ConvexFunction::translate(
        ConvexFunction::quadratic(DMatrix::identity(2, 2), Point::zeros(2)).expect("valid fixture"),
        Point::from([3.0, 2.0]),
    )
    .expect("valid fixture");
    ProductProblem::new(vec![
        ConvexFunction::indicator_halfspace(Point::from([1.0, 0.0]), -1.0).expect("valid fixture"),
        ConvexFunction::indicator_halfspace(Point::from([-1.0, 0.0]), -1.0).expect("valid fixture"),
        target,
    ])
    .expect("valid fixture")
}

/// `ι_{R × {0}}` and `ι_{R × {2}}`.
pub fn parallel_lines() -> ProductProblem {
    let axis = LinearSubspace::coordinate(2, &[0]);
    ProductProblem::new(vec![
        ConvexFunction::IndicatorSubspace(axis.clone()),
        ConvexFunction::indicator_affine(Point::from([0.0, 2.0]), axis).expect("valid fixture"),
    ])
    .expect("valid fixture")
}
