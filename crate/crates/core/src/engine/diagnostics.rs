//! Sequences whose asymptotics are known for every firmly nonexpansive
//! splitting operator. Each takes the true gap vector `v`, so these are
//! meant for problems where `v` is known in closed form.

use super::trace::IterationTrace;
use crate::point::Point;

/// `‖n v + T^n x − y‖` for each recorded `n`. Nonincreasing whenever
/// `y = T(y + v)`.
pub fn fejer_audit(trace: &IterationTrace, v: &Point, y: &Point) -> Vec<f64> {
    trace
        .entries()
        .iter()
        .map(|e| {
            let mut p = e.governing.clone();
            p.axpy(e.n as f64, v);
            p.distance(y)
        })
        .collect()
}

/// `‖d_n − v‖²` for each recorded `n`; summable.
pub fn displacement_residuals(trace: &IterationTrace, v: &Point) -> Vec<f64> {
    trace.entries().iter().map(|e| (&e.diff - v).norm_squared()).collect()
}

/// `(n + 1)⟨d_n − v, v⟩` for each recorded `n`; tends to zero.
pub fn kuchen_diagnostic(trace: &IterationTrace, v: &Point) -> Vec<f64> {
    trace
        .entries()
        .iter()
        .map(|e| (e.n + 1) as f64 * (&e.diff - v).dot(v))
        .collect()
}

pub fn is_nonincreasing(seq: &[f64], slack: f64) -> bool {
    seq.windows(2).all(|w| w[1] <= w[0] + slack)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotonicity_with_slack() {
        assert!(is_nonincreasing(&[3.0, 2.0, 2.0, 1.0], 0.0));
        assert!(!is_nonincreasing(&[3.0, 2.0, 2.1], 0.0));
        assert!(is_nonincreasing(&[3.0, 2.0, 2.0 + 1e-12], 1e-10));
        assert!(is_nonincreasing(&[], 0.0));
    }
}
