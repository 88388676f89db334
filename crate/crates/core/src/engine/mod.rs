//! The Douglas-Rachford iteration for `minimize ι_U + g`.
//!
//! The governing sequence is `x_{n+1} = T x_n` with
//! `T = Id − P_U + Prox_g R_U`. When `U ∩ dom g` is empty the governing
//! sequence drifts with constant velocity `−v` (the minimal displacement
//! vector), while the shadow `P_U x_n` still converges to a minimizer of
//! `ι_U + g(· − v)`. The solver estimates `v` from the tail of the
//! differences `x_n − x_{n+1}` and classifies the run from the shadow.

mod diagnostics;
mod trace;

use std::fmt;

pub use diagnostics::{displacement_residuals, fejer_audit, is_nonincreasing, kuchen_diagnostic};
pub use trace::{estimate_gap_vector, IterationTrace, TraceEntry};
pub(crate) use trace::{tail_stats, TailStats};

use crate::error::{check_dim, Error, Result};
use crate::functions::ConvexFunction;
use crate::point::Point;
use crate::subspace::LinearSubspace;
use crate::tolerances::Tolerances;

/// `minimize ι_U(x) + g(x)` over `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    subspace: LinearSubspace,
    function: ConvexFunction,
}

/// Which splitting operator to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// `T = Id − P_U + Prox_g R_U`
    #[default]
    Standard,
    /// `T̃ = Id − Prox_g + P_U (2 Prox_g − Id)`
    Switched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// The shadow converged and the gap vector vanishes.
    Consistent,
    /// The shadow converged while the iteration drifts along a nonzero gap vector.
    NormalSolution,
    /// The shadow norm blew up or keeps growing.
    Divergent,
    /// Neither converged nor visibly divergent within the iteration budget.
    IterationLimit,
}

impl Outcome {
    pub fn converged(self) -> bool {
        matches!(self, Outcome::Consistent | Outcome::NormalSolution)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub variant: Variant,
    pub outcome: Outcome,
    /// Estimate of the minimal displacement vector `v` of the standard operator.
    pub v_hat: Point,
    /// `‖P_U v̂‖`; the gap vector lies in `U⊥` whenever the constraint
    /// qualification holds.
    pub gap_in_subspace: f64,
    /// Set when `gap_in_subspace` exceeds the orthogonality tolerance.
    pub cq_failure_evidence: bool,
    pub shadow_limit: Option<Point>,
    pub min_value_estimate: Option<f64>,
    pub iterations_used: usize,
    pub trace: IterationTrace,
}

impl Problem {
    pub fn new(subspace: LinearSubspace, function: ConvexFunction) -> Result<Self> {
        function.validate()?;
        check_dim(subspace.ambient_dim(), function.dim())?;
        Ok(Self { subspace, function })
    }

    pub fn dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn subspace(&self) -> &LinearSubspace {
        &self.subspace
    }

    pub fn function(&self) -> &ConvexFunction {
        &self.function
    }

    /// `T x = x − P_U x + Prox_g(R_U x)`
    pub fn dr_operator(&self, x: &Point) -> Result<Point> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.standard_step(x).next)
    }

    /// `T̃ x = x − Prox_g x + P_U(2 Prox_g x − x)`
    pub fn dr_operator_switched(&self, x: &Point) -> Result<Point> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.switched_step(x).next)
    }

    fn standard_step(&self, x: &Point) -> Step {
        let shadow = self.subspace.project_unchecked(x);
        let reflected = {
            let mut r = shadow.scaled(2.0);
            r -= x;
            r
        };
        let prox_point = self.function.prox_unchecked(&reflected);
        let next = x - &shadow + &prox_point;
        Step {
            shadow,
            prox_point,
            next,
        }
    }

    fn switched_step(&self, x: &Point) -> Step {
        let shadow = self.subspace.project_unchecked(x);
        let prox_point = self.function.prox_unchecked(x);
        let mut reflected = prox_point.scaled(2.0);
        reflected -= x;
        let next = x - &prox_point + self.subspace.project_unchecked(&reflected);
        Step {
            shadow,
            prox_point,
            next,
        }
    }

    /// Runs the chosen operator from `x0` for at most `max_iters` steps,
    /// stopping early once the shadow and the displacement have settled or
    /// the shadow norm exceeds the divergence threshold.
    pub fn iterate(&self, x0: &Point, tol: &Tolerances, max_iters: usize, variant: Variant) -> Result<SolveReport> {
        tol.validate()?;
        check_dim(self.dim(), x0.dim())?;
        if max_iters < tol.tail_window {
            return Err(Error::InvalidConfig(format!(
                "max_iters ({max_iters}) must be at least tail_window ({})",
                tol.tail_window
            )));
        }
        let mut trace = drive(x0, tol, max_iters, |x| {
            let step = match variant {
                Variant::Standard => self.standard_step(x),
                Variant::Switched => self.switched_step(x),
            };
            let g_value = self.function.tracking_value_unchecked(&step.prox_point);
            (step, g_value)
        });
        let displacement = estimate_gap_vector(&trace, tol.tail_window)?;
        trace.attach_gap(&displacement);
        let outcome = classify_outcome(&trace, &displacement, &self.subspace, tol)?;
        // T̃^n − T̃^{n+1} → −v for the switched operator.
        let v_hat = match variant {
            Variant::Standard => displacement,
            Variant::Switched => -displacement,
        };
        let gap_in_subspace = self.subspace.project_unchecked(&v_hat).norm();
        let stats = tail_stats(&trace, tol.tail_window).expect("trace covers the tail window");
        let converged = outcome.converged();
        Ok(SolveReport {
            variant,
            outcome,
            v_hat,
            gap_in_subspace,
            cq_failure_evidence: gap_in_subspace > tol.gap_orthogonality_tol(),
            shadow_limit: converged.then_some(stats.mean_shadow),
            min_value_estimate: converged.then_some(stats.mean_g_value),
            iterations_used: trace.len(),
            trace,
        })
    }
}

pub(crate) struct Step {
    pub shadow: Point,
    pub prox_point: Point,
    pub next: Point,
}

/// Shared iteration loop. `step` maps the current governing point to its
/// shadow, prox evaluation and successor together with the tracked value.
pub(crate) fn drive(
    x0: &Point,
    tol: &Tolerances,
    max_iters: usize,
    mut step: impl FnMut(&Point) -> (Step, f64),
) -> IterationTrace {
    let mut trace = IterationTrace::new();
    let mut x = x0.clone();
    for n in 0..max_iters {
        let (s, g_value) = step(&x);
        let diff = &x - &s.next;
        let shadow_norm = s.shadow.norm();
        let finite = s.next.is_finite();
        trace.push(TraceEntry {
            n,
            governing: x,
            shadow: s.shadow,
            prox_point: s.prox_point,
            diff,
            g_value,
            kuchen_diag: f64::NAN,
        });
        x = s.next;
        if !finite || shadow_norm > tol.divergence_threshold {
            break;
        }
        if trace.len() >= tol.tail_window {
            if let Some(stats) = tail_stats(&trace, tol.tail_window) {
                if settled(&stats, tol) {
                    break;
                }
            }
        }
    }
    trace
}

fn settled(stats: &TailStats, tol: &Tolerances) -> bool {
    stats.max_shadow_step <= tol.fixedpoint_tol && stats.diff_spread <= tol.fixedpoint_tol
}

/// Classifies a finished run from its tail.
///
/// `displacement` is the tail estimate of `x_n − x_{n+1}` for the operator
/// that produced `trace`; only its norm and its component in `U` matter.
pub fn classify_outcome(
    trace: &IterationTrace,
    displacement: &Point,
    subspace: &LinearSubspace,
    tol: &Tolerances,
) -> Result<Outcome> {
    let stats = tail_stats(trace, tol.tail_window).ok_or(Error::InsufficientTrace {
        len: trace.len(),
        needed: tol.tail_window,
    })?;
    let last = trace.last().expect("nonempty trace");
    let last_norm = last.shadow.norm();
    if !last_norm.is_finite() || !last.governing.is_finite() || last_norm > tol.divergence_threshold {
        return Ok(Outcome::Divergent);
    }
    if settled(&stats, tol) {
        if displacement.norm() <= tol.fixedpoint_tol {
            return Ok(Outcome::Consistent);
        }
        if subspace.project(displacement)?.norm() <= tol.gap_orthogonality_tol() {
            return Ok(Outcome::NormalSolution);
        }
        return Ok(Outcome::IterationLimit);
    }
    if stats.shadow_norm_slope > tol.fixedpoint_tol {
        return Ok(Outcome::Divergent);
    }
    Ok(Outcome::IterationLimit)
}
