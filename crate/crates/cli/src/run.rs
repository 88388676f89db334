//! Executing a loaded problem and rendering the results.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use drsplit_core::{IterationTrace, Outcome, Point};

use crate::error::{CliError, Result};
use crate::schema::{LoadedProblem, Model};

/// What a run reports, for either kind of model.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outcome: Outcome,
    /// One gap vector for DR runs, one per block for parallel runs.
    pub v_hat: Vec<Point>,
    /// `shadow_limit` for DR runs, `mean_limit` for parallel runs.
    pub limit: Option<Point>,
    pub parallel: bool,
    pub cq_failure_evidence: Option<bool>,
    pub min_value_estimate: Option<f64>,
    pub iterations_used: usize,
    pub wall_time: Duration,
    pub trace: IterationTrace,
}

pub fn execute(loaded: &LoadedProblem) -> Result<RunSummary> {
    let start = Instant::now();
    let summary = match &loaded.model {
        Model::Dr { problem, variant } => {
            let r = problem.iterate(&loaded.x0, &loaded.tolerances, loaded.max_iters, *variant)?;
            RunSummary {
                outcome: r.outcome,
                v_hat: vec![r.v_hat],
                limit: r.shadow_limit,
                parallel: false,
                cq_failure_evidence: Some(r.cq_failure_evidence),
                min_value_estimate: r.min_value_estimate,
                iterations_used: r.iterations_used,
                wall_time: Duration::ZERO,
                trace: r.trace,
            }
        }
        Model::Parallel(pp) => {
            let r = pp.run_parallel(&loaded.x0, &loaded.tolerances, loaded.max_iters)?;
            RunSummary {
                outcome: r.outcome,
                v_hat: r.block_gap_vectors,
                limit: r.mean_limit,
                parallel: true,
                cq_failure_evidence: None,
                min_value_estimate: r.min_value_estimate,
                iterations_used: r.iterations_used,
                wall_time: Duration::ZERO,
                trace: r.trace,
            }
        }
    };
    Ok(RunSummary {
        wall_time: start.elapsed(),
        ..summary
    })
}

/// Process exit code for an outcome.
pub fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Consistent | Outcome::NormalSolution => 0,
        Outcome::Divergent => 2,
        Outcome::IterationLimit => 3,
    }
}

/// Shortest round-trip decimal, with `-0` printed as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

pub fn format_point(p: &Point) -> String {
    p.coords()
        .iter()
        .map(|&c| format_number(c))
        .collect::<Vec<_>>()
        .join(",")
}

impl RunSummary {
    /// `key: value` lines. Per-block vectors are separated by `;`.
    pub fn render(&self) -> String {
        let limit_key = if self.parallel { "mean_limit" } else { "shadow_limit" };
        let mut lines = vec![
            format!("outcome: {}", self.outcome),
            format!(
                "v_hat: {}",
                self.v_hat.iter().map(format_point).collect::<Vec<_>>().join(";")
            ),
            format!(
                "{limit_key}: {}",
                self.limit.as_ref().map_or_else(|| "none".to_string(), format_point)
            ),
            format!(
                "min_value_estimate: {}",
                self.min_value_estimate
                    .map_or_else(|| "none".to_string(), format_number)
            ),
        ];
        if let Some(flag) = self.cq_failure_evidence {
            lines.push(format!("cq_failure_evidence: {flag}"));
        }
        lines.push(format!("iterations_used: {}", self.iterations_used));
        lines.push(format!("wall_time: {:.6}s", self.wall_time.as_secs_f64()));
        lines.join("\n") + "\n"
    }
}

/// Column names of the trace table for points of dimension `dim`.
pub fn trace_header(dim: usize) -> Vec<String> {
    let mut header = vec!["n".to_string()];
    for name in ["governing", "shadow", "prox", "diff"] {
        header.extend((0..dim).map(|i| format!("{name}_{i}")));
    }
    header.push("g_value".to_string());
    header.push("kuchen_diag".to_string());
    header
}

/// Writes the trace as CSV, one row per iteration, 17 significant digits.
pub fn write_trace(trace: &IterationTrace, out: impl Write) -> Result<()> {
    let dim = trace.entries().first().map_or(0, |e| e.governing.dim());
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(trace_header(dim))?;
    for e in trace.entries() {
        let mut row = vec![e.n.to_string()];
        for p in [&e.governing, &e.shadow, &e.prox_point, &e.diff] {
            row.extend(p.coords().iter().map(|c| format!("{c:.16e}")));
        }
        row.push(format!("{:.16e}", e.g_value));
        row.push(format!("{:.16e}", e.kuchen_diag));
        writer.write_record(&row)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_trace_file(trace: &IterationTrace, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })?;
    write_trace(trace, std::io::BufWriter::new(file))
}
