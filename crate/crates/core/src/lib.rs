//! Douglas-Rachford splitting for `minimize ι_U(x) + g(x)` with `U` a linear
//! subspace of `R^d` and `g` convex, including problems where `U` and
//! `dom g` do not intersect.
//!
//! In the inconsistent case the governing sequence diverges, but it does so
//! along the minimal displacement vector `v`, and the shadow sequence
//! `P_U T^n x` still converges to a minimizer of `ι_U + g(· − v)`. This crate
//! runs the iteration, estimates `v`, and reports the shadow limit together
//! with a classification of the run. [`product`] applies the same machinery
//! to sums of finitely many functions through the diagonal of a product
//! space.
//!
//! ```
//! use drsplit_core::{fixtures, Outcome, Point, Tolerances, Variant};
//!
//! // U = R × {0}, g = ι_{R × {1}}: no feasible point, gap vector (0, −1).
//! let problem = fixtures::feasibility_line();
//! let report = problem
//!     .iterate(&Point::from([2.0, 0.0]), &Tolerances::default(), 200, Variant::Standard)
//!     .unwrap();
//! assert_eq!(report.outcome, Outcome::NormalSolution);
//! assert_eq!(report.shadow_limit, Some(Point::from([2.0, 0.0])));
//! ```

pub mod engine;
pub mod error;
pub mod fixtures;
pub mod functions;
pub mod oracles;
pub mod point;
pub mod product;
pub mod subspace;
pub mod tolerances;

pub use engine::{
    classify_outcome, estimate_gap_vector, IterationTrace, Outcome, Problem, SolveReport, TraceEntry, Variant,
};
pub use error::{Error, Result};
pub use functions::{ConvexFunction, Quadratic};
pub use nalgebra;
pub use point::Point;
pub use product::{ParallelReport, ParallelState, ProductProblem};
pub use subspace::{orthonormalize, LinearSubspace};
pub use tolerances::Tolerances;
