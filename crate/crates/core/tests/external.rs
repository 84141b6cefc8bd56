mod common;

use std::time::{Duration, Instant};

use upcycle_net::milp::{build_milp, BuildOptions, CanonicalMilp};
use upcycle_net::model_io::{run_external_solver, verify_solution, ExternalConfig, SolveStatus};
use upcycle_net::scenario::hand_chain_instance;

fn model() -> CanonicalMilp {
    build_milp(&hand_chain_instance(), BuildOptions::default()).unwrap()
}

fn run(cmd: &str, limit: Option<f64>) -> upcycle_net::model_io::ExternalRun {
    run_external_solver(
        &model(),
        &ExternalConfig {
            command: cmd.into(),
            time_limit: limit.map(Duration::from_secs_f64),
        },
    )
    .unwrap()
}

#[test]
fn nonzero_exit_is_unknown_with_stderr() {
    let r = run("printf '=obj= 1\\n=status= optimal\\n' > {sol}; echo boom >&2; exit 3", None);
    assert_eq!(r.exit_code, Some(3));
    assert_eq!(r.solution.status, SolveStatus::Unknown);
    assert!(r.stderr.contains("boom"));
    assert!(!r.diagnostics.is_empty());
}

#[test]
fn timeout_with_incumbent_is_feasible() {
    let start = Instant::now();
    let r = run(
        "printf '=obj= 600\\n=bound= 540\\nbcf_cf1_std 1\\n' > {sol}; sleep 30",
        Some(0.5),
    );
    assert!(start.elapsed() < Duration::from_secs(10), "child not killed");
    assert!(r.timed_out);
    assert_eq!(r.exit_code, None);
    assert_eq!(r.solution.status, SolveStatus::Feasible);
    assert_eq!(r.solution.gap, Some(0.1));
}

#[test]
fn missing_or_garbled_file_is_unknown_zero() {
    let r = run("true", None);
    assert_eq!(r.solution.status, SolveStatus::Unknown);
    assert!(r.solution.values.iter().all(|&v| v == 0.0));
    assert!(r.diagnostics.iter().any(|d| d.contains("no solution file")));

    let r = run("echo 'no_such_column 1' > {sol}", None);
    assert_eq!(r.solution.status, SolveStatus::Unknown);
    assert!(r.diagnostics.iter().any(|d| d.contains("rejected")));
}

#[test]
fn values_without_status_are_an_incumbent() {
    let r = run("echo 'bcf_cf1_std 1' > {sol}", None);
    assert_eq!(r.solution.status, SolveStatus::Feasible);
}

#[test]
fn placeholders_are_substituted() {
    let r = run("echo {time_limit} >&2; test -f {mps} && echo '=status= infeasible' > {sol}", Some(42.0));
    assert_eq!(r.stderr.trim(), "42");
    assert_eq!(r.solution.status, SolveStatus::Infeasible);
}

#[test]
fn bundled_scipy_adapter_solves_hand_instance() {
    let Some(cmd) = common::external_solver_cmd() else {
        eprintln!("no external solver available; skipping");
        return;
    };
    let m = model();
    let r = run_external_solver(
        &m,
        &ExternalConfig {
            command: cmd,
            time_limit: Some(Duration::from_secs(120)),
        },
    )
    .unwrap();
    assert_eq!(r.solution.status, SolveStatus::Optimal, "{:?} {}", r.diagnostics, r.stderr);
    assert!((r.solution.objective(&m) - 540.0).abs() < 1e-6);
    assert!(verify_solution(&r.solution, &m, 1e-6).pass);
}
