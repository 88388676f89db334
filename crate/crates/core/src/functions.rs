//! Catalog of proper lower semicontinuous convex functions with exact
//! proximal mappings.
//!
//! Every prox here uses unit step: `prox(g, x) = argmin_z ½‖z − x‖² + g(z)`.
//! Indicator variants therefore prox to the metric projection onto their set,
//! and [`ConvexFunction::domain_projection`] projects onto the closure of the
//! effective domain.

use std::fmt;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{check_dim, invalid, Result};
use crate::point::Point;
use crate::subspace::LinearSubspace;

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexFunction {
    /// `ι_U`
    IndicatorSubspace(LinearSubspace),
    /// `ι_{anchor + U}`
    IndicatorAffine {
        anchor: Point,
        subspace: LinearSubspace,
    },
    /// `ι_{⟨normal, ·⟩ ≤ offset}`
    IndicatorHalfspace {
        normal: Point,
        offset: f64,
    },
    IndicatorBall {
        center: Point,
        radius: f64,
    },
    IndicatorSingleton(Point),
    IndicatorBox {
        lo: Point,
        hi: Point,
    },
    /// Indicator of `{(t, s) ∈ R² : s ≥ slope·|t| + intercept}`.
    IndicatorEpigraphAbs {
        slope: f64,
        intercept: f64,
    },
    /// `½⟨x, Qx⟩ + ⟨c, x⟩`
    Quadratic(Quadratic),
    /// `½ dist_U(x)² + ⟨tilt, x⟩`
    TiltedSquaredDistance {
        subspace: LinearSubspace,
        tilt: Point,
    },
    /// `½‖x‖² + ⟨linear, x⟩ + ι_{−offset + U}(x)`
    QuadraticAffineRestricted {
        linear: Point,
        offset: Point,
        subspace: LinearSubspace,
    },
    /// `x ↦ inner(x − shift)`
    Translate {
        inner: Box<ConvexFunction>,
        shift: Point,
    },
    /// Blockwise sum `(x_1, …, x_m) ↦ Σ g_i(x_i)` over a product space.
    Separable(Vec<ConvexFunction>),
}

impl ConvexFunction {
    pub fn indicator_halfspace(normal: Point, offset: f64) -> Result<Self> {
        Self::IndicatorHalfspace { normal, offset }.validated()
    }

    pub fn indicator_ball(center: Point, radius: f64) -> Result<Self> {
        Self::IndicatorBall { center, radius }.validated()
    }

    pub fn indicator_box(lo: Point, hi: Point) -> Result<Self> {
        Self::IndicatorBox { lo, hi }.validated()
    }

    pub fn indicator_affine(anchor: Point, subspace: LinearSubspace) -> Result<Self> {
        Self::IndicatorAffine { anchor, subspace }.validated()
    }

    pub fn indicator_epigraph_abs(slope: f64, intercept: f64) -> Result<Self> {
        Self::IndicatorEpigraphAbs { slope, intercept }.validated()
    }

    pub fn quadratic(matrix: DMatrix<f64>, linear: Point) -> Result<Self> {
        Ok(Self::Quadratic(Quadratic::new(matrix, linear)?))
    }

    pub fn tilted_squared_distance(subspace: LinearSubspace, tilt: Point) -> Result<Self> {
        Self::TiltedSquaredDistance { subspace, tilt }.validated()
    }

    pub fn quadratic_affine_restricted(linear: Point, offset: Point, subspace: LinearSubspace) -> Result<Self> {
        Self::QuadraticAffineRestricted {
            linear,
            offset,
            subspace,
        }
        .validated()
    }

    pub fn translate(inner: ConvexFunction, shift: Point) -> Result<Self> {
        Self::Translate {
            inner: Box::new(inner),
            shift,
        }
        .validated()
    }

    pub fn separable(blocks: Vec<ConvexFunction>) -> Result<Self> {
        Self::Separable(blocks).validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Checks every parameter constraint, recursively.
    pub fn validate(&self) -> Result<()> {
        use ConvexFunction::*;
        let finite = |name: &'static str, p: &Point| {
            if p.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, "coordinates must be finite"))
            }
        };
        match self {
            IndicatorSubspace(_) => Ok(()),
            IndicatorAffine { anchor, subspace } => {
                finite("anchor", anchor)?;
                check_dim(subspace.ambient_dim(), anchor.dim())
            }
            IndicatorHalfspace { normal, offset } => {
                finite("normal", normal)?;
                if normal.norm() == 0.0 {
                    return Err(invalid("normal", "must be nonzero"));
                }
                if !offset.is_finite() {
                    return Err(invalid("offset", "must be finite"));
                }
                Ok(())
            }
            IndicatorBall { center, radius } => {
                finite("center", center)?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(invalid("radius", format!("must be positive, got {radius}")));
                }
                Ok(())
            }
            IndicatorSingleton(p) => finite("p", p),
            IndicatorBox { lo, hi } => {
                finite("lo", lo)?;
                finite("hi", hi)?;
                check_dim(lo.dim(), hi.dim())?;
                if lo.coords().iter().zip(hi.coords()).any(|(l, h)| l > h) {
                    return Err(invalid("lo", "must be componentwise <= hi"));
                }
                Ok(())
            }
            IndicatorEpigraphAbs { slope, intercept } => {
                if !(slope.is_finite() && *slope > 0.0) {
                    return Err(invalid("slope", format!("must be positive, got {slope}")));
                }
                if !intercept.is_finite() {
                    return Err(invalid("intercept", "must be finite"));
                }
                Ok(())
            }
            Quadratic(_) => Ok(()),
            TiltedSquaredDistance { subspace, tilt } => {
                finite("tilt", tilt)?;
                check_dim(subspace.ambient_dim(), tilt.dim())
            }
            QuadraticAffineRestricted {
                linear,
                offset,
                subspace,
            } => {
                finite("linear", linear)?;
                finite("offset", offset)?;
                check_dim(subspace.ambient_dim(), linear.dim())?;
                check_dim(subspace.ambient_dim(), offset.dim())
            }
            Translate { inner, shift } => {
                finite("shift", shift)?;
                inner.validate()?;
                check_dim(inner.dim(), shift.dim())
            }
            Separable(blocks) => {
                if blocks.is_empty() {
                    return Err(invalid("blocks", "must be nonempty"));
                }
                blocks.iter().try_for_each(ConvexFunction::validate)
            }
        }
    }

    /// Ambient dimension of the function's argument.
    pub fn dim(&self) -> usize {
        use ConvexFunction::*;
        match self {
            IndicatorSubspace(u) => u.ambient_dim(),
            IndicatorAffine { anchor, .. } => anchor.dim(),
            IndicatorHalfspace { normal, .. } => normal.dim(),
            IndicatorBall { center, .. } => center.dim(),
            IndicatorSingleton(p) => p.dim(),
            IndicatorBox { lo, .. } => lo.dim(),
            IndicatorEpigraphAbs { .. } => 2,
            Quadratic(q) => q.dim(),
            TiltedSquaredDistance { tilt, .. } => tilt.dim(),
            QuadraticAffineRestricted { linear, .. } => linear.dim(),
            Translate { shift, .. } => shift.dim(),
            Separable(blocks) => blocks.iter().map(ConvexFunction::dim).sum(),
        }
    }

    /// True when the function is the indicator of a closed convex set.
    pub fn is_indicator(&self) -> bool {
        use ConvexFunction::*;
        match self {
            IndicatorSubspace(_)
            | IndicatorAffine { .. }
            | IndicatorHalfspace { .. }
            | IndicatorBall { .. }
            | IndicatorSingleton(_)
            | IndicatorBox { .. }
            | IndicatorEpigraphAbs { .. } => true,
            Quadratic(_) | TiltedSquaredDistance { .. } | QuadraticAffineRestricted { .. } => false,
            Translate { inner, .. } => inner.is_indicator(),
            Separable(blocks) => blocks.iter().all(ConvexFunction::is_indicator),
        }
    }

    /// True when `dom g` is the whole space.
    pub fn has_full_domain(&self) -> bool {
        use ConvexFunction::*;
        match self {
            Quadratic(_) | TiltedSquaredDistance { .. } => true,
            IndicatorSubspace(u) => u.dim() == u.ambient_dim(),
            IndicatorAffine { subspace, .. } => subspace.dim() == subspace.ambient_dim(),
            IndicatorHalfspace { .. }
            | IndicatorBox { .. }
            | IndicatorBall { .. }
            | IndicatorSingleton(_)
            | IndicatorEpigraphAbs { .. } => false,
            QuadraticAffineRestricted { subspace, .. } => subspace.dim() == subspace.ambient_dim(),
            Translate { inner, .. } => inner.has_full_domain(),
            Separable(blocks) => blocks.iter().all(ConvexFunction::has_full_domain),
        }
    }

    /// `Prox_g(x)`, the unique minimizer of `z ↦ ½‖z − x‖² + g(z)`.
    pub fn prox(&self, x: &Point) -> Result<Point> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.prox_unchecked(x))
    }

    pub(crate) fn prox_unchecked(&self, x: &Point) -> Point {
        use ConvexFunction::*;
        match self {
            IndicatorSubspace(_)
            | IndicatorAffine { .. }
            | IndicatorHalfspace { .. }
            | IndicatorBall { .. }
            | IndicatorSingleton(_)
            | IndicatorBox { .. }
            | IndicatorEpigraphAbs { .. } => self.domain_projection_unchecked(x),
            Quadratic(q) => q.prox(x),
            TiltedSquaredDistance { subspace, tilt } => {
                // (Id + P_{U⊥}) z = x − tilt, inverted as Id − ½ P_{U⊥}.
                let y = x - tilt;
                let perp = &y - subspace.project_unchecked(&y);
                let mut z = y;
                z.axpy(-0.5, &perp);
                z
            }
            QuadraticAffineRestricted {
                linear,
                offset,
                subspace,
            } => {
                // ½‖z − x‖² + ½‖z‖² + ⟨w, z⟩ = ‖z − (x − w)/2‖² + const on −b + W.
                let target = (x - linear).scaled(0.5);
                project_affine(&-offset, subspace, &target)
            }
            Translate { inner, shift } => inner.prox_unchecked(&(x - shift)) + shift,
            Separable(blocks) => map_blocks(blocks, x, |g, xi| g.prox_unchecked(xi)),
        }
    }

    /// Projection onto the closure of `dom g`.
    pub fn domain_projection(&self, x: &Point) -> Result<Point> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.domain_projection_unchecked(x))
    }

    pub(crate) fn domain_projection_unchecked(&self, x: &Point) -> Point {
        use ConvexFunction::*;
        match self {
            IndicatorSubspace(u) => u.project_unchecked(x),
            IndicatorAffine { anchor, subspace } => project_affine(anchor, subspace, x),
            IndicatorHalfspace { normal, offset } => {
                let excess = normal.dot(x) - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    let mut p = x.clone();
                    p.axpy(-excess / normal.norm_squared(), normal);
                    p
                }
            }
            IndicatorBall { center, radius } => {
                let offset = x - center;
                let r = offset.norm();
                if r <= *radius {
                    x.clone()
                } else {
                    offset.scaled(radius / r) + center
                }
            }
            IndicatorSingleton(p) => p.clone(),
            IndicatorBox { lo, hi } => Point::from(
                x.coords()
                    .iter()
                    .zip(lo.coords().iter().zip(hi.coords()))
                    .map(|(&c, (&l, &h))| c.clamp(l, h))
                    .collect::<Vec<_>>(),
            ),
            IndicatorEpigraphAbs { slope, intercept } => {
                let (t, s) = project_epigraph_abs(*slope, *intercept, x[0], x[1]);
                Point::from([t, s])
            }
            Quadratic(_) | TiltedSquaredDistance { .. } => x.clone(),
            QuadraticAffineRestricted { offset, subspace, .. } => project_affine(&-offset, subspace, x),
            Translate { inner, shift } => inner.domain_projection_unchecked(&(x - shift)) + shift,
            Separable(blocks) => map_blocks(blocks, x, |g, xi| g.domain_projection_unchecked(xi)),
        }
    }

    /// Distance from `x` to the closure of `dom g`.
    pub fn domain_residual(&self, x: &Point) -> Result<f64> {
        Ok(self.domain_projection(x)?.distance(x))
    }

    /// `g(x)` in `R ∪ {+∞}`. Set membership is decided up to `feasibility_tol`
    /// on the distance to the set.
    pub fn evaluate(&self, x: &Point, feasibility_tol: f64) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.evaluate_unchecked(x, feasibility_tol))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &Point, tol: f64) -> f64 {
        use ConvexFunction::*;
        let membership = |g: &ConvexFunction| {
            if g.membership_residual(x) <= tol {
                0.0
            } else {
                f64::INFINITY
            }
        };
        match self {
            IndicatorSubspace(_)
            | IndicatorAffine { .. }
            | IndicatorHalfspace { .. }
            | IndicatorBall { .. }
            | IndicatorSingleton(_)
            | IndicatorBox { .. }
            | IndicatorEpigraphAbs { .. } => membership(self),
            Quadratic(_) | TiltedSquaredDistance { .. } => self.finite_part_unchecked(x),
            QuadraticAffineRestricted { .. } => membership(self) + self.finite_part_unchecked(x),
            Translate { inner, shift } => inner.evaluate_unchecked(&(x - shift), tol),
            Separable(blocks) => {
                let mut offset = 0;
                let mut total = 0.0;
                for g in blocks {
                    let d = g.dim();
                    let xi = Point::from(x.coords()[offset..offset + d].to_vec());
                    total += g.evaluate_unchecked(&xi, tol);
                    offset += d;
                }
                total
            }
        }
    }

    /// `g(x)` with every set constraint dropped: zero for indicators, the
    /// quadratic part of the restricted quadratic.
    pub(crate) fn finite_part_unchecked(&self, x: &Point) -> f64 {
        use ConvexFunction::*;
        match self {
            IndicatorSubspace(_)
            | IndicatorAffine { .. }
            | IndicatorHalfspace { .. }
            | IndicatorBall { .. }
            | IndicatorSingleton(_)
            | IndicatorBox { .. }
            | IndicatorEpigraphAbs { .. } => 0.0,
            Quadratic(q) => q.value(x),
            TiltedSquaredDistance { subspace, tilt } => {
                let perp = x - subspace.project_unchecked(x);
                0.5 * perp.norm_squared() + tilt.dot(x)
            }
            QuadraticAffineRestricted { linear, .. } => 0.5 * x.norm_squared() + linear.dot(x),
            Translate { inner, shift } => inner.finite_part_unchecked(&(x - shift)),
            Separable(blocks) => {
                let mut offset = 0;
                let mut total = 0.0;
                for g in blocks {
                    let d = g.dim();
                    let xi = Point::from(x.coords()[offset..offset + d].to_vec());
                    total += g.finite_part_unchecked(&xi);
                    offset += d;
                }
                total
            }
        }
    }

    /// Constraint violation of `x` for the set part of `g`, computed from
    /// the defining inequalities rather than from the projection. Equals the
    /// distance to the set except near the corner of the epigraph, where it
    /// is a lower bound. Zero for full-domain variants.
    pub(crate) fn membership_residual(&self, x: &Point) -> f64 {
        use ConvexFunction::*;
        let subspace_residual = |u: &LinearSubspace, y: &Point| (y - u.project_unchecked(y)).norm();
        match self {
            IndicatorSubspace(u) => subspace_residual(u, x),
            IndicatorAffine { anchor, subspace } => subspace_residual(subspace, &(x - anchor)),
            IndicatorHalfspace { normal, offset } => ((normal.dot(x) - offset) / normal.norm()).max(0.0),
            IndicatorBall { center, radius } => (x.distance(center) - radius).max(0.0),
            IndicatorSingleton(p) => x.distance(p),
            IndicatorBox { lo, hi } => x
                .coords()
                .iter()
                .zip(lo.coords().iter().zip(hi.coords()))
                .map(|(&c, (&l, &h))| (l - c).max(c - h).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt(),
            IndicatorEpigraphAbs { slope, intercept } => {
                ((slope * x[0].abs() + intercept - x[1]) / (1.0 + slope * slope).sqrt()).max(0.0)
            }
            Quadratic(_) | TiltedSquaredDistance { .. } => 0.0,
            QuadraticAffineRestricted { offset, subspace, .. } => subspace_residual(subspace, &(x + offset)),
            Translate { inner, shift } => inner.membership_residual(&(x - shift)),
            Separable(blocks) => {
                let mut offset = 0;
                let mut total = 0.0;
                for g in blocks {
                    let d = g.dim();
                    let xi = Point::from(x.coords()[offset..offset + d].to_vec());
                    total += g.membership_residual(&xi).powi(2);
                    offset += d;
                }
                total.sqrt()
            }
        }
    }

    /// Finite surrogate of `g(x)` used for value tracking along iterates:
    /// indicator parts contribute their distance to the set instead of `0/∞`,
    /// and every other part contributes `g` evaluated at the nearest point of
    /// its domain.
    pub fn tracking_value(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.tracking_value_unchecked(x))
    }

    pub(crate) fn tracking_value_unchecked(&self, x: &Point) -> f64 {
        use ConvexFunction::*;
        match self {
            Translate { inner, shift } => inner.tracking_value_unchecked(&(x - shift)),
            Separable(blocks) => {
                let mut offset = 0;
                let mut total = 0.0;
                for g in blocks {
                    let d = g.dim();
                    let xi = Point::from(x.coords()[offset..offset + d].to_vec());
                    total += g.tracking_value_unchecked(&xi);
                    offset += d;
                }
                total
            }
            g if g.is_indicator() => g.domain_projection_unchecked(x).distance(x),
            g => {
                let p = g.domain_projection_unchecked(x);
                g.evaluate_unchecked(&p, f64::INFINITY)
            }
        }
    }
}

fn project_affine(anchor: &Point, subspace: &LinearSubspace, x: &Point) -> Point {
    subspace.project_unchecked(&(x - anchor)) + anchor
}

fn map_blocks(blocks: &[ConvexFunction], x: &Point, f: impl Fn(&ConvexFunction, &Point) -> Point) -> Point {
    let mut out = Vec::with_capacity(x.dim());
    let mut offset = 0;
    for g in blocks {
        let d = g.dim();
        let xi = Point::from(x.coords()[offset..offset + d].to_vec());
        out.extend_from_slice(f(g, &xi).coords());
        offset += d;
    }
    Point::from(out)
}

/// Projection of `(t, s)` onto `{s ≥ slope·|t| + intercept}`.
///
/// Outside the set the projection lies on one of the two boundary rays
/// emanating from the corner `(0, intercept)`; the nearest candidate wins.
fn project_epigraph_abs(slope: f64, intercept: f64, t: f64, s: f64) -> (f64, f64) {
    if s >= slope * t.abs() + intercept {
        return (t, s);
    }
    let norm = (1.0 + slope * slope).sqrt();
    let ray = |sign: f64| {
        let (dt, ds) = (sign / norm, slope / norm);
        let tau = (t * dt + (s - intercept) * ds).max(0.0);
        (tau * dt, intercept + tau * ds)
    };
    let corner = (0.0, intercept);
    let dist2 = |p: (f64, f64)| (p.0 - t).powi(2) + (p.1 - s).powi(2);
    [ray(1.0), ray(-1.0)]
        .into_iter()
        .fold(corner, |best, c| if dist2(c) < dist2(best) { c } else { best })
}

/// `½⟨x, Qx⟩ + ⟨c, x⟩` with `Q` symmetric positive semidefinite.
#[derive(Clone)]
pub struct Quadratic {
    matrix: DMatrix<f64>,
    linear: Point,
    // Factorization of Id + Q, positive definite because Q is PSD.
    shifted: Cholesky<f64, Dyn>,
}

impl Quadratic {
    pub fn new(matrix: DMatrix<f64>, linear: Point) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(invalid("q", format!("must be square, got {}x{}", n, matrix.ncols())));
        }
        check_dim(n, linear.dim())?;
        if !linear.is_finite() || matrix.iter().any(|v| !v.is_finite()) {
            return Err(invalid("q", "entries must be finite"));
        }
        let scale = matrix.amax().max(1.0);
        if (&matrix - matrix.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("q", "must be symmetric"));
        }
        let min_eig = SymmetricEigen::new(matrix.clone()).eigenvalues.min();
        if min_eig < -1e-10 * scale {
            return Err(invalid(
                "q",
                format!("must be positive semidefinite (min eigenvalue {min_eig})"),
            ));
        }
        let shifted = Cholesky::new(DMatrix::identity(n, n) + &matrix)
            .ok_or_else(|| invalid("q", "Id + Q is not positive definite"))?;
        Ok(Self {
            matrix,
            linear,
            shifted,
        })
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn linear(&self) -> &Point {
        &self.linear
    }

    fn value(&self, x: &Point) -> f64 {
        let v = DVector::from_column_slice(x.coords());
        0.5 * v.dot(&(&self.matrix * &v)) + self.linear.dot(x)
    }

    fn prox(&self, x: &Point) -> Point {
        let rhs = DVector::from_iterator(x.dim(), x.coords().iter().zip(self.linear.coords()).map(|(a, c)| a - c));
        Point::from(self.shifted.solve(&rhs).as_slice().to_vec())
    }
}

impl PartialEq for Quadratic {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.linear == other.linear
    }
}

impl fmt::Debug for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quadratic")
            .field("matrix", &self.matrix)
            .field("linear", &self.linear)
            .finish()
    }
}
