//! Problem files and batch runs for the `drsplit` command.
//!
//! A problem file is a JSON object:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "mode": "dr",
//!   "subspace": [[1, 0]],
//!   "function": {"indicator_affine": {"anchor": [0, 1], "basis": [[1, 0]]}},
//!   "x0": [2, 0]
//! }
//! ```
//!
//! Parallel problems replace `subspace` and `function` with a `blocks` list.

pub mod error;
pub mod run;
pub mod schema;

pub use error::{CliError, Result};
pub use run::{execute, exit_code, format_point, write_trace, RunSummary};
pub use schema::{parse_problem, read_problem, FunctionSpec, LoadedProblem, Mode, Model, ProblemFile};
