//! Parallel splitting for `minimize Σ_i g_i(x)`.
//!
//! The sum is rewritten over the product space `X^m` as `ι_Δ + ⊕ g_i`, where
//! `Δ` is the diagonal. Douglas-Rachford on that pair decouples into one prox
//! per block followed by an average:
//!
//! ```text
//! x_{n+1,i} = x_{n,i} − x̄_n + Prox_{g_i}(2 x̄_n − x_{n,i})
//! x̄_{n+1}   = (1/m) Σ_i x_{n+1,i}
//! ```
//!
//! When the domains of the `g_i` do not intersect, the block gap vectors
//! `v_i` are nonzero, sum to zero, and the mean converges to a minimizer of
//! `Σ g_i(· − v_i)`.

use crate::engine::{classify_outcome, drive, estimate_gap_vector, tail_stats, IterationTrace, Outcome, Problem, Step};
use crate::error::{check_dim, invalid, Result};
use crate::functions::ConvexFunction;
use crate::point::Point;
use crate::subspace::LinearSubspace;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductProblem {
    blocks: Vec<ConvexFunction>,
    dim: usize,
}

/// Block iterates `x_{n,i}` and their mean `x̄_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelState {
    pub block_points: Vec<Point>,
    pub mean: Point,
}

impl ParallelState {
    pub fn new(block_points: Vec<Point>) -> Self {
        let mean = Point::mean(&block_points).expect("at least one block");
        Self { block_points, mean }
    }

    /// All blocks at `x0`.
    pub fn start(x0: &Point, blocks: usize) -> Self {
        Self {
            block_points: vec![x0.clone(); blocks],
            mean: x0.clone(),
        }
    }

    /// The state as a single point of the product space.
    pub fn to_product(&self) -> Point {
        Point::concat(&self.block_points)
    }
}

#[derive(Debug, Clone)]
pub struct ParallelReport {
    pub outcome: Outcome,
    pub mean_limit: Option<Point>,
    /// Per-block estimates `v̂_i` of the product-space gap vector.
    pub block_gap_vectors: Vec<Point>,
    pub min_value_estimate: Option<f64>,
    pub iterations_used: usize,
    /// Trace in the product space; `shadow` holds `(x̄_n, …, x̄_n)`.
    pub trace: IterationTrace,
}

impl ParallelReport {
    /// `‖Σ_i v̂_i‖`
    pub fn gap_sum_norm(&self) -> f64 {
        let d = self.block_gap_vectors[0].dim();
        self.block_gap_vectors
            .iter()
            .fold(Point::zeros(d), |acc, v| acc + v)
            .norm()
    }

    /// The mean iterate `x̄_n` for each recorded `n`.
    pub fn means(&self) -> impl Iterator<Item = Point> + '_ {
        let m = self.block_gap_vectors.len();
        self.trace
            .entries()
            .iter()
            .map(move |e| e.shadow.split(m).swap_remove(0))
    }
}

impl ProductProblem {
    pub fn new(blocks: Vec<ConvexFunction>) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(invalid(
                "blocks",
                format!("need at least 2 functions, got {}", blocks.len()),
            ));
        }
        let dim = blocks[0].dim();
        for g in &blocks {
            g.validate()?;
            check_dim(dim, g.dim())?;
        }
        Ok(Self { blocks, dim })
    }

    pub fn blocks(&self) -> &[ConvexFunction] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The diagonal `Δ = {(x, …, x)}` of `X^m` with basis `(e_k, …, e_k)/√m`.
    pub fn diagonal(&self) -> LinearSubspace {
        let m = self.blocks.len();
        let scale = 1.0 / (m as f64).sqrt();
        let basis: Vec<Point> = (0..self.dim)
            .map(|k| Point::concat(&vec![Point::unit(self.dim, k).scaled(scale); m]))
            .collect();
        LinearSubspace::span(m * self.dim, &basis).expect("diagonal basis has consistent dimension")
    }

    /// The equivalent two-function problem `ι_Δ + ⊕ g_i` on `X^m`.
    pub fn embed(&self) -> Problem {
        let g = ConvexFunction::Separable(self.blocks.clone());
        Problem::new(self.diagonal(), g).expect("embedding preserves dimensions")
    }

    pub fn parallel_step(&self, state: &ParallelState) -> Result<ParallelState> {
        check_dim(self.blocks.len(), state.block_points.len())?;
        for p in &state.block_points {
            check_dim(self.dim, p.dim())?;
        }
        check_dim(self.dim, state.mean.dim())?;
        Ok(self.step_with_prox(state).0)
    }

    fn step_with_prox(&self, state: &ParallelState) -> (ParallelState, Vec<Point>) {
        let mut next = Vec::with_capacity(self.blocks.len());
        let mut proxes = Vec::with_capacity(self.blocks.len());
        for (g, x) in self.blocks.iter().zip(&state.block_points) {
            let mut reflected = state.mean.scaled(2.0);
            reflected -= x;
            let p = g.prox_unchecked(&reflected);
            next.push(x - &state.mean + &p);
            proxes.push(p);
        }
        (ParallelState::new(next), proxes)
    }

    /// Runs the parallel iteration with every block started at `x0`.
    pub fn run_parallel(&self, x0: &Point, tol: &Tolerances, max_iters: usize) -> Result<ParallelReport> {
        tol.validate()?;
        check_dim(self.dim, x0.dim())?;
        if max_iters < tol.tail_window {
            return Err(crate::error::Error::InvalidConfig(format!(
                "max_iters ({max_iters}) must be at least tail_window ({})",
                tol.tail_window
            )));
        }
        let m = self.blocks.len();
        let start = ParallelState::start(x0, m).to_product();
        let mut trace = drive(&start, tol, max_iters, |x| {
            let state = ParallelState::new(x.split(m));
            let (next, proxes) = self.step_with_prox(&state);
            let g_value = self
                .blocks
                .iter()
                .zip(&proxes)
                .map(|(g, p)| g.tracking_value_unchecked(p))
                .sum();
            let step = Step {
                shadow: Point::concat(&vec![state.mean.clone(); m]),
                prox_point: Point::concat(&proxes),
                next: next.to_product(),
            };
            (step, g_value)
        });
        let gap = estimate_gap_vector(&trace, tol.tail_window)?;
        trace.attach_gap(&gap);
        let outcome = classify_outcome(&trace, &gap, &self.diagonal(), tol)?;
        let stats = tail_stats(&trace, tol.tail_window).expect("trace covers the tail window");
        let converged = outcome.converged();
        Ok(ParallelReport {
            outcome,
            mean_limit: converged.then(|| stats.mean_shadow.split(m).swap_remove(0)),
            block_gap_vectors: gap.split(m),
            min_value_estimate: converged.then_some(stats.mean_g_value),
            iterations_used: trace.len(),
            trace,
        })
    }
}

/// `Σ_i ‖x − P_{D_i} x‖²` with `D_i` the closure of `dom g_i`.
pub fn least_squares_residual(sets: &[ConvexFunction], x: &Point) -> Result<f64> {
    sets.iter().map(|g| Ok(g.domain_residual(x)?.powi(2))).sum()
}

/// Checks `x ∈ L = Fix((1/m) Σ P_{D_i}) = ∩_i (v_i + D_i)` up to `tol`.
pub fn verify_least_squares_membership(sets: &[ConvexFunction], x: &Point, gaps: &[Point], tol: f64) -> Result<bool> {
    check_dim(sets.len(), gaps.len())?;
    let projections = sets
        .iter()
        .map(|g| g.domain_projection(x))
        .collect::<Result<Vec<_>>>()?;
    let average = Point::mean(&projections).ok_or_else(|| invalid("sets", "must be nonempty"))?;
    if x.distance(&average) > tol {
        return Ok(false);
    }
    for (g, v) in sets.iter().zip(gaps) {
        let shifted = x - v;
        if g.domain_residual(&shifted)? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
