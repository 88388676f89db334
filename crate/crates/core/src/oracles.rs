//! Slow reference computations that do not go through the splitting
//! operators: alternating projections for the gap vector, exhaustive grid
//! search for prox points and normal solutions, and closed-form iterates of
//! two worked problems.

use crate::error::{check_dim, Error, Result};
use crate::functions::ConvexFunction;
use crate::point::Point;
use crate::subspace::LinearSubspace;

/// `(P_U − Id)((P_C P_U)^iters x0)` with `C` the closure of `dom set`.
///
/// Converges to `P_{cl(U − C)}(0)`, the gap vector between `U` and `C`.
pub fn gap_vector_altproj(subspace: &LinearSubspace, set: &ConvexFunction, x0: &Point, iters: usize) -> Result<Point> {
    check_dim(subspace.ambient_dim(), set.dim())?;
    check_dim(subspace.ambient_dim(), x0.dim())?;
    let mut x = x0.clone();
    for _ in 0..iters {
        x = set.domain_projection_unchecked(&subspace.project_unchecked(&x));
    }
    Ok(subspace.project_unchecked(&x) - &x)
}

/// Grid points per axis at each refinement level of [`prox_bruteforce`].
const LEVEL_POINTS: f64 = 400.0;

/// Exhaustive minimization of `objective` over the grid
/// `lo + pitch·Z^d ∩ [lo, hi]`, visited in lexicographic order.
/// Ties keep the lexicographically smallest point.
pub fn grid_minimize(objective: impl Fn(&Point) -> f64, lo: &Point, hi: &Point, pitch: f64) -> Result<(Point, f64)> {
    check_dim(lo.dim(), hi.dim())?;
    if pitch.is_nan() || pitch <= 0.0 {
        return Err(Error::EmptyGrid { pitch });
    }
    let counts = lo
        .coords()
        .iter()
        .zip(hi.coords())
        .map(|(l, h)| {
            let width = h - l;
            if width < pitch {
                Err(Error::EmptyGrid { pitch })
            } else {
                Ok((width / pitch + 1e-9).floor() as usize + 1)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let d = lo.dim();
    let mut index = vec![0usize; d];
    let mut z = lo.clone();
    let mut best: Option<(Point, f64)> = None;
    loop {
        for (k, (zk, &i)) in z.coords_mut().iter_mut().zip(&index).enumerate() {
            *zk = lo[k] + i as f64 * pitch;
        }
        let value = objective(&z);
        if value < best.as_ref().map_or(f64::INFINITY, |b| b.1) {
            best = Some((z.clone(), value));
        }
        // odometer, last axis fastest
        let mut axis = d;
        loop {
            if axis == 0 {
                return best.ok_or(Error::InfeasibleGrid);
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < counts[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
}

/// Grid-search estimate of `Prox_g(x)`, accurate to well below `pitch`.
///
/// The first level is an exhaustive grid over the box with set membership
/// relaxed to the grid pitch, so that thin sets (lines, points) still contain
/// grid points. Membership alone quantizes the objective: near a curved
/// boundary whose tangent is parallel to a grid axis, a whole chord of width
/// about `√(2·radius·pitch)` looks equally feasible. Later levels therefore
/// search shrinking windows around the incumbent with the exact-penalty
/// objective
///
/// ```text
/// ½‖z − x‖² + f(z) + M·r(z)   subject to r(z) ≤ 2·pitch
/// ```
///
/// where `f` is `g` without its set constraint, `r` the constraint residual,
/// and `M` the multiplier `‖z − x + ∇f(z)‖` estimated at the incumbent. The
/// penalized objective grows quadratically around the prox, so each level
/// is accurate to a small multiple of its pitch. Refinement stops once the
/// pitch is below `pitch / 10`.
pub fn prox_bruteforce(g: &ConvexFunction, x: &Point, lo: &Point, hi: &Point, pitch: f64) -> Result<Point> {
    check_dim(g.dim(), x.dim())?;
    check_dim(g.dim(), lo.dim())?;
    check_dim(g.dim(), hi.dim())?;
    let width = lo
        .coords()
        .iter()
        .zip(hi.coords())
        .map(|(l, h)| h - l)
        .fold(0.0, f64::max);
    let mut level_pitch = pitch.max(width / LEVEL_POINTS);
    let relaxed = |z: &Point| 0.5 * z.distance(x).powi(2) + g.evaluate_unchecked(z, level_pitch);
    let (mut z, _) = grid_minimize(relaxed, lo, hi, level_pitch)?;

    let dist = z.distance(x) + 1.0;
    let mut radius = 2.0 * (2.0 * dist * level_pitch).sqrt() + 3.0 * (dist * level_pitch * level_pitch).cbrt();
    let target = pitch / 10.0;
    loop {
        let next_pitch = (2.0 * radius / LEVEL_POINTS).min(0.5 * level_pitch);
        let band = 2.0 * next_pitch;
        let multiplier = smooth_gradient(g, x, &z).norm();
        let penalized = |y: &Point| {
            let r = g.membership_residual(y);
            if r > band {
                f64::INFINITY
            } else {
                0.5 * y.distance(x).powi(2) + g.finite_part_unchecked(y) + multiplier * r
            }
        };
        let (window_lo, window_hi) = window(&z, radius, lo, hi);
        z = grid_minimize(penalized, &window_lo, &window_hi, next_pitch)?.0;
        level_pitch = next_pitch;
        if level_pitch <= target {
            return Ok(z);
        }
        radius = 20.0 * level_pitch;
    }
}

/// Central-difference gradient of `½‖· − x‖² + f` at `z`, with `f` the
/// finite part of `g`.
fn smooth_gradient(g: &ConvexFunction, x: &Point, z: &Point) -> Point {
    let h = 1e-6;
    let mut grad = z - x;
    let mut probe = z.clone();
    for i in 0..z.dim() {
        probe.coords_mut()[i] = z[i] + h;
        let up = g.finite_part_unchecked(&probe);
        probe.coords_mut()[i] = z[i] - h;
        let down = g.finite_part_unchecked(&probe);
        probe.coords_mut()[i] = z[i];
        grad.coords_mut()[i] += (up - down) / (2.0 * h);
    }
    grad
}

/// `[c − r, c + r]` clipped to `[lo, hi]`.
fn window(c: &Point, r: f64, lo: &Point, hi: &Point) -> (Point, Point) {
    let clip = |bound: &Point, sign: f64, pick: fn(f64, f64) -> f64| {
        Point::from(
            c.coords()
                .iter()
                .zip(bound.coords())
                .map(|(ci, b)| pick(ci + sign * r, *b))
                .collect::<Vec<_>>(),
        )
    };
    (clip(lo, -1.0, f64::max), clip(hi, 1.0, f64::min))
}

/// Grid-search estimate of `min_{u ∈ U} g(u − v)`.
///
/// The grid runs over coordinates in the orthonormal basis of `U`, so `lo`
/// and `hi` have dimension `dim U`. Returns the minimizing `u` (in ambient
/// coordinates) and the minimal value.
pub fn argmin_bruteforce(
    subspace: &LinearSubspace,
    g: &ConvexFunction,
    v: &Point,
    lo: &Point,
    hi: &Point,
    pitch: f64,
) -> Result<(Point, f64)> {
    check_dim(subspace.ambient_dim(), g.dim())?;
    check_dim(subspace.ambient_dim(), v.dim())?;
    check_dim(subspace.dim(), lo.dim())?;
    let embed = |c: &Point| {
        let mut u = Point::zeros(subspace.ambient_dim());
        for (ci, b) in c.coords().iter().zip(subspace.basis()) {
            u.axpy(*ci, b);
        }
        u
    };
    let (c, value) = grid_minimize(|c| g.evaluate_unchecked(&(embed(c) - v), pitch), lo, hi, pitch)?;
    if !value.is_finite() {
        return Err(Error::InfeasibleGrid);
    }
    Ok((embed(&c), value))
}

/// Problems whose governing sequence is known in closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormFixture {
    /// `g = ½‖·‖² + ⟨w, ·⟩ + ι_{−b + W}` with `{0} ≠ W ⊆ U⊥`, `w ∈ W`,
    /// `b ∈ U⊥ ∩ W⊥`:
    /// `T^n x = (P_{U⊥} − (1 − 2^{−n}) P_W) x − n b − (1 − 2^{−n}) w` for `n ≥ 1`.
    QuadraticAffine {
        subspace: LinearSubspace,
        w_space: LinearSubspace,
        w: Point,
        b: Point,
    },
    /// `g = ½ dist_U² + ⟨u*, ·⟩` with `u* ∈ U`:
    /// `T^n x = −n u* + P_U x + 2^{−n} P_{U⊥} x`.
    TiltedDistance { subspace: LinearSubspace, tilt: Point },
}

impl ClosedFormFixture {
    /// `R^3`, `U = span{e1}`, `W = span{e2}`, `w = e2`, `b = e3`.
    pub fn quadratic_affine() -> Self {
        Self::QuadraticAffine {
            subspace: LinearSubspace::coordinate(3, &[0]),
            w_space: LinearSubspace::coordinate(3, &[1]),
            w: Point::unit(3, 1),
            b: Point::unit(3, 2),
        }
    }

    /// `R^2`, `U = R × {0}`, `u* = (1, 0)`.
    pub fn tilted_distance() -> Self {
        Self::TiltedDistance {
            subspace: LinearSubspace::coordinate(2, &[0]),
            tilt: Point::from([1.0, 0.0]),
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "quadratic_affine" => Ok(Self::quadratic_affine()),
            "tilted_distance" => Ok(Self::tilted_distance()),
            other => Err(Error::InvalidParameter {
                name: "fixture_id",
                reason: format!("unknown fixture `{other}`"),
            }),
        }
    }

    fn ambient_dim(&self) -> usize {
        match self {
            Self::QuadraticAffine { subspace, .. } | Self::TiltedDistance { subspace, .. } => subspace.ambient_dim(),
        }
    }
}

/// Evaluates the closed-form `T^n x0` of `fixture`.
pub fn closed_form_iterate(fixture: &ClosedFormFixture, n: usize, x0: &Point) -> Result<Point> {
    check_dim(fixture.ambient_dim(), x0.dim())?;
    let half_pow = 0.5f64.powi(n as i32);
    match fixture {
        ClosedFormFixture::QuadraticAffine {
            subspace,
            w_space,
            w,
            b,
        } => {
            if n == 0 {
                return Err(Error::InvalidParameter {
                    name: "n",
                    reason: "formula holds for n >= 1".into(),
                });
            }
            let factor = 1.0 - half_pow;
            let mut out = subspace.project_complement(x0)?;
            out.axpy(-factor, &w_space.project(x0)?);
            out.axpy(-(n as f64), b);
            out.axpy(-factor, w);
            Ok(out)
        }
        ClosedFormFixture::TiltedDistance { subspace, tilt } => {
            let mut out = subspace.project(x0)?;
            out.axpy(-(n as f64), tilt);
            out.axpy(half_pow, &subspace.project_complement(x0)?);
            Ok(out)
        }
    }
}
