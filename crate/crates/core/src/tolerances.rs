use crate::error::{Error, Result};

/// Numerical thresholds shared by the solvers and classifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Residual norm below which a Gram-Schmidt direction is considered dependent.
    pub orthonormality_tol: f64,
    /// Convergence threshold for shadow steps, displacement spread and set membership.
    pub fixedpoint_tol: f64,
    /// Shadow norm above which a run is declared divergent.
    pub divergence_threshold: f64,
    /// Number of trailing iterations used for tail statistics.
    pub tail_window: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthonormality_tol: 1e-10,
            fixedpoint_tol: 1e-9,
            divergence_threshold: 1e8,
            tail_window: 50,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")))
            }
        };
        positive("orthonormality_tol", self.orthonormality_tol)?;
        positive("fixedpoint_tol", self.fixedpoint_tol)?;
        positive("divergence_threshold", self.divergence_threshold)?;
        if self.tail_window == 0 {
            return Err(Error::InvalidConfig("tail_window must be at least 1".into()));
        }
        Ok(())
    }

    /// Bound on `‖P_U v̂‖` for an estimated gap vector to count as orthogonal to `U`.
    pub fn gap_orthogonality_tol(&self) -> f64 {
        1e3 * self.fixedpoint_tol
    }
}
