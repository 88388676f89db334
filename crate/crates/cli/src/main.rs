use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use drsplit_cli::run::write_trace_file;
use drsplit_cli::{execute, exit_code, read_problem, CliError, Mode};

#[derive(Parser)]
#[command(
    name = "drsplit",
    version,
    about = "Douglas-Rachford splitting for possibly infeasible problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print a summary.
    Run {
        path: PathBuf,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Fixed-point tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        tail_window: Option<usize>,
        /// Write the per-iteration trace as CSV.
        #[arg(long, value_name = "PATH")]
        emit_trace: Option<PathBuf>,
        /// Override the mode given in the file.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        quiet: bool,
    },
    /// Validate a problem file and print it with defaults filled in.
    Normalize { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run {
            path,
            max_iters,
            tol,
            tail_window,
            emit_trace,
            mode,
            quiet,
        } => {
            let mut loaded = read_problem(&path)?;
            if let Some(mode) = mode {
                loaded.model = loaded.model.with_mode(mode)?;
            }
            if let Some(n) = max_iters {
                loaded.max_iters = n;
            }
            if let Some(t) = tol {
                loaded.tolerances.fixedpoint_tol = t;
            }
            if let Some(k) = tail_window {
                loaded.tolerances.tail_window = k;
            }
            let summary = execute(&loaded)?;
            if let Some(trace_path) = emit_trace {
                write_trace_file(&summary.trace, &trace_path)?;
            }
            if !quiet {
                print!("{}", summary.render());
            }
            Ok(exit_code(summary.outcome))
        }
        Command::Normalize { path } => {
            println!("{}", read_problem(&path)?.to_json()?);
            Ok(0)
        }
    }
}
