//! Closed linear subspaces of `R^d`, their projectors and reflectors.

use crate::error::{check_dim, Result};
use crate::point::Point;

/// Default rank threshold used by [`LinearSubspace::span`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// A linear subspace stored as an orthonormal basis.
///
/// An empty basis encodes the zero subspace `{0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSubspace {
    ambient_dim: usize,
    basis: Vec<Point>,
}

impl LinearSubspace {
    /// The subspace `{0}` of `R^ambient_dim`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// The whole space `R^ambient_dim`.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| Point::unit(ambient_dim, i)).collect(),
        }
    }

    /// Span of the given vectors with the default rank threshold.
    pub fn span(ambient_dim: usize, vectors: &[Point]) -> Result<Self> {
        orthonormalize(ambient_dim, vectors, DEFAULT_RANK_TOL)
    }

    /// Span of a subset of the standard basis vectors.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        Self {
            ambient_dim,
            basis: axes.iter().map(|&i| Point::unit(ambient_dim, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the subspace itself.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    /// `P_U x = Σ ⟨x, b_i⟩ b_i`
    pub fn project(&self, x: &Point) -> Result<Point> {
        check_dim(self.ambient_dim, x.dim())?;
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Point) -> Point {
        let mut out = Point::zeros(self.ambient_dim);
        for b in &self.basis {
            out.axpy(x.dot(b), b);
        }
        out
    }

    /// `P_{U⊥} x = x − P_U x`
    pub fn project_complement(&self, x: &Point) -> Result<Point> {
        Ok(x - self.project(x)?)
    }

    /// `R_U x = 2 P_U x − x`
    pub fn reflect(&self, x: &Point) -> Result<Point> {
        check_dim(self.ambient_dim, x.dim())?;
        Ok(self.reflect_unchecked(x))
    }

    pub(crate) fn reflect_unchecked(&self, x: &Point) -> Point {
        let mut out = self.project_unchecked(x).scaled(2.0);
        out -= x;
        out
    }

    /// Orthonormal basis of `U⊥`.
    pub fn orthogonal_complement(&self) -> LinearSubspace {
        let d = self.ambient_dim;
        let mut basis = self.basis.clone();
        let k = basis.len();
        // Standard basis vectors sorted by how much of them lies outside U keeps
        // the Gram-Schmidt residuals well away from the rank threshold.
        let mut axes: Vec<(usize, f64)> = (0..d)
            .map(|i| {
                let e = Point::unit(d, i);
                (i, (&e - self.project_unchecked(&e)).norm())
            })
            .collect();
        axes.sort_by(|a, b| b.1.total_cmp(&a.1));
        for (i, _) in axes {
            if basis.len() == d {
                break;
            }
            if let Some(q) = gram_schmidt_step(&basis, &Point::unit(d, i), DEFAULT_RANK_TOL) {
                basis.push(q);
            }
        }
        LinearSubspace {
            ambient_dim: d,
            basis: basis.split_off(k),
        }
    }

    /// Distance from `x` to the subspace.
    pub fn distance(&self, x: &Point) -> Result<f64> {
        Ok(self.project_complement(x)?.norm())
    }

    /// Largest deviation of the Gram matrix of the basis from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - target).abs());
            }
        }
        worst
    }
}

/// Orthonormalizes `raw` by modified Gram-Schmidt with one reorthogonalization
/// pass. Vectors whose residual norm falls below `rank_tol` are dropped.
pub fn orthonormalize(ambient_dim: usize, raw: &[Point], rank_tol: f64) -> Result<LinearSubspace> {
    for v in raw {
        check_dim(ambient_dim, v.dim())?;
    }
    let mut basis: Vec<Point> = Vec::with_capacity(raw.len().min(ambient_dim));
    for v in raw {
        if basis.len() == ambient_dim {
            break;
        }
        if let Some(q) = gram_schmidt_step(&basis, v, rank_tol) {
            basis.push(q);
        }
    }
    Ok(LinearSubspace { ambient_dim, basis })
}

fn gram_schmidt_step(basis: &[Point], v: &Point, rank_tol: f64) -> Option<Point> {
    let mut r = v.clone();
    for _ in 0..2 {
        for q in basis {
            let c = r.dot(q);
            r.axpy(-c, q);
        }
    }
    let n = r.norm();
    (n > rank_tol).then(|| r.scaled(1.0 / n))
}
