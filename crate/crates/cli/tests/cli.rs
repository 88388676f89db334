use std::path::{Path, PathBuf};
use std::process::Command;

use drsplit_cli::{execute, parse_problem, read_problem, CliError, Model};
use drsplit_core::{fixtures, IterationTrace, Point, ProductProblem, Variant};

fn problem_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn all_problem_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("problems"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn drsplit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_drsplit")).args(args).output().unwrap()
}

fn validation_path(err: CliError) -> String {
    match err {
        CliError::Validation { path, .. } | CliError::Parse { path, .. } => path,
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn feasibility_file_builds_the_fixture() {
    let loaded = read_problem(&problem_file("feasibility_line.json")).unwrap();
    let Model::Dr { problem, variant } = loaded.model else {
        panic!("expected a DR model")
    };
    assert_eq!(variant, Variant::Standard);
    assert_eq!(problem, fixtures::feasibility_line());
    assert_eq!(loaded.x0, Point::from([2.0, 0.0]));
    assert_eq!(loaded.max_iters, 10_000);
}

#[test]
fn singleton_file_builds_the_fixture() {
    let loaded = read_problem(&problem_file("singleton_pair.json")).unwrap();
    assert_eq!(loaded.model, Model::Parallel(fixtures::singleton_pair()));
}

#[test]
fn halfspace_file_builds_the_fixture() {
    let loaded = read_problem(&problem_file("halfspaces_with_quadratic.json")).unwrap();
    let expected: ProductProblem = fixtures::halfspaces_with_quadratic();
    assert_eq!(loaded.model, Model::Parallel(expected));
    assert_eq!(loaded.tolerances.fixedpoint_tol, 1e-10);
}

#[test]
fn validation_errors_name_the_key() {
    let wrong_length = r#"{"dimension": 2, "mode": "dr", "subspace": [[1, 0, 0]],
        "function": {"indicator_singleton": {"p": [0, 0]}}, "x0": [0, 0]}"#;
    assert_eq!(validation_path(parse_problem(wrong_length).unwrap_err()), "subspace[0]");

    let bad_anchor = r#"{"dimension": 2, "mode": "dr", "subspace": [],
        "function": {"indicator_affine": {"anchor": [0], "basis": []}}, "x0": [0, 0]}"#;
    assert_eq!(
        validation_path(parse_problem(bad_anchor).unwrap_err()),
        "function.indicator_affine.anchor"
    );

    let bad_block = r#"{"dimension": 2, "mode": "parallel", "blocks": [
        {"indicator_singleton": {"p": [0, 0]}}, {"indicator_ball": {"center": [0, 0], "radius": -1}}],
        "x0": [0, 0]}"#;
    assert_eq!(
        validation_path(parse_problem(bad_block).unwrap_err()),
        "blocks[1].indicator_ball"
    );

    let missing = r#"{"dimension": 2, "mode": "dr", "subspace": [], "x0": [0, 0]}"#;
    assert_eq!(validation_path(parse_problem(missing).unwrap_err()), "function");

    let mixed = r#"{"dimension": 2, "mode": "parallel", "subspace": [], "blocks": [], "x0": [0, 0]}"#;
    assert_eq!(validation_path(parse_problem(mixed).unwrap_err()), "subspace");
}

#[test]
fn parse_errors_name_the_key() {
    let unknown_key = r#"{"dimension": 2, "mode": "dr", "subspace": [], "colour": 1,
        "function": {"indicator_singleton": {"p": [0, 0]}}, "x0": [0, 0]}"#;
    assert!(matches!(parse_problem(unknown_key), Err(CliError::Parse { .. })));

    let unknown_variant = r#"{"dimension": 2, "mode": "dr", "subspace": [],
        "function": {"indicator_cone": {}}, "x0": [0, 0]}"#;
    assert_eq!(validation_path(parse_problem(unknown_variant).unwrap_err()), "function");

    let bad_type = r#"{"dimension": 2, "mode": "dr", "subspace": [[1, "a"]],
        "function": {"indicator_singleton": {"p": [0, 0]}}, "x0": [0, 0]}"#;
    assert_eq!(validation_path(parse_problem(bad_type).unwrap_err()), "subspace[0][1]");

    let unknown_mode = r#"{"dimension": 2, "mode": "serial", "x0": [0, 0]}"#;
    assert_eq!(validation_path(parse_problem(unknown_mode).unwrap_err()), "mode");
}

#[test]
fn normalized_files_load_back_identically() {
    for path in all_problem_files() {
        let loaded = read_problem(&path).unwrap();
        let again = parse_problem(&loaded.to_json().unwrap()).unwrap();
        assert_eq!(again, loaded, "{}", path.display());
    }
}

#[test]
fn rotated_subspaces_survive_normalization() {
    let text = r#"{"dimension": 3, "mode": "dr", "subspace": [[1, 2, 3], [0.3, -1, 0.5]],
        "function": {"translate": {"inner": {"indicator_ball": {"center": [0.1, 0.2, 0.3], "radius": 0.7}},
                                    "shift": [1, -1, 0.25]}},
        "x0": [0.5, 0.25, -1], "max_iters": 500}"#;
    let loaded = parse_problem(text).unwrap();
    let again = parse_problem(&loaded.to_json().unwrap()).unwrap();
    let (Model::Dr { problem: a, .. }, Model::Dr { problem: b, .. }) = (&loaded.model, &again.model) else {
        panic!("expected DR models")
    };
    assert_eq!(a.function(), b.function());
    for (u, w) in a.subspace().basis().iter().zip(b.subspace().basis()) {
        assert!(u.max_abs_diff(w) <= 1e-14);
    }
    assert_eq!(again.max_iters, 500);
}

#[test]
fn mode_override_switches_variants_only() {
    let loaded = read_problem(&problem_file("feasibility_line.json")).unwrap();
    let switched = loaded.model.clone().with_mode(drsplit_cli::Mode::DrSwitched).unwrap();
    assert!(matches!(
        switched,
        Model::Dr {
            variant: Variant::Switched,
            ..
        }
    ));
    assert!(loaded.model.with_mode(drsplit_cli::Mode::Parallel).is_err());
}

#[test]
fn summary_reports_the_gap() {
    let loaded = read_problem(&problem_file("feasibility_line.json")).unwrap();
    let text = execute(&loaded).unwrap().render();
    assert!(text.contains("outcome: NormalSolution\n"), "{text}");
    assert!(text.contains("v_hat: 0,-1\n"), "{text}");
    assert!(text.contains("shadow_limit: 2,0\n"), "{text}");
}

#[test]
fn exit_codes_follow_outcomes() {
    let cases = [
        ("feasibility_line.json", 0),
        ("tilted_distance.json", 2),
        ("singleton_pair.json", 0),
        ("epigraph_drift.json", 0),
    ];
    for (name, code) in cases {
        let out = drsplit(&["run", problem_file(name).to_str().unwrap(), "--quiet"]);
        assert_eq!(out.status.code(), Some(code), "{name}");
        assert!(out.stdout.is_empty());
    }
    let limited = drsplit(&[
        "run",
        problem_file("quadratic_affine.json").to_str().unwrap(),
        "--max-iters",
        "60",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(limited.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&limited.stdout).contains("outcome: IterationLimit"));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = dir.path().join("bad.json");
    std::fs::write(&malformed, "{\"dimension\": 2, ").unwrap();
    let out = drsplit(&["run", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let missing = dir.path().join("missing.json");
    assert_eq!(drsplit(&["run", missing.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(drsplit(&["run"]).status.code(), Some(1));
    assert_eq!(drsplit(&["frobnicate"]).status.code(), Some(1));

    let parallel = problem_file("singleton_pair.json");
    let out = drsplit(&["run", parallel.to_str().unwrap(), "--mode", "dr"]);
    assert_eq!(out.status.code(), Some(1));
}

fn parse_trace(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn flatten(trace: &IterationTrace) -> Vec<Vec<f64>> {
    trace
        .entries()
        .iter()
        .map(|e| {
            let mut row = vec![e.n as f64];
            for p in [&e.governing, &e.shadow, &e.prox_point, &e.diff] {
                row.extend_from_slice(p.coords());
            }
            row.push(e.g_value);
            row.push(e.kuchen_diag);
            row
        })
        .collect()
}

#[test]
fn trace_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["quadratic_affine.json", "singleton_pair.json"] {
        let trace_path = dir.path().join("trace.csv");
        let out = drsplit(&[
            "run",
            problem_file(name).to_str().unwrap(),
            "--emit-trace",
            trace_path.to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let (header, rows) = parse_trace(&trace_path);
        let loaded = read_problem(&problem_file(name)).unwrap();
        let summary = execute(&loaded).unwrap();
        let dim = summary.trace.entries()[0].governing.dim();
        assert_eq!(header, drsplit_cli::run::trace_header(dim));
        assert_eq!(header[1], "governing_0");
        assert_eq!(header.last().unwrap(), "kuchen_diag");
        assert_eq!(rows, flatten(&summary.trace), "{name}");
    }
}

#[test]
fn normalize_prints_a_loadable_file() {
    let out = drsplit(&["normalize", problem_file("tilted_distance.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let reloaded = parse_problem(&text).unwrap();
    assert_eq!(reloaded, read_problem(&problem_file("tilted_distance.json")).unwrap());
    assert!(text.contains("\"tail_window\": 50"));
}
