//! Hand a generated instance to an external MPS solver under a time limit,
//! then verify the returned incumbent and its gap.
//!
//! `{time_limit}` in the template receives the solver-side limit; the
//! process itself is killed only 30 s later.
//!
//! ```text
//! cargo run --release --example external_solver -- [time limit s] [solver template]
//! ```
//!
//! The default template runs the bundled scipy/HiGHS adapter.

use std::time::Duration;

use upcycle_net::milp::{build_milp, BuildOptions};
use upcycle_net::model_io::{relative_gap, run_external_solver, verify_solution, ExternalConfig};
use upcycle_net::report::breakdown_costs;
use upcycle_net::scenario::{generate, GenSpec};

fn main() -> upcycle_net::Result<()> {
    let mut args = std::env::args().skip(1);
    let limit: f64 = args.next().map_or(10.0, |s| s.parse().expect("seconds"));
    let command = args
        .next()
        .unwrap_or_else(|| format!("python3 {}/scripts/scipy_mps_solve.py {{mps}} {{sol}} {{time_limit}}", env!("CARGO_MANIFEST_DIR")))
        // the solver stops itself; the runner only kills it well after that
        .replace("{time_limit}", &limit.to_string());
    let spec = GenSpec {
        n_sources: 15,
        n_cf: 15,
        n_rtf: 6,
        n_cpf: 4,
        n_dpf: 4,
        n_sinks: 3,
        ..GenSpec::default()
    };
    let inst = generate(&spec)?;
    let model = build_milp(&inst, BuildOptions::default())?;
    println!("{} columns, {} rows; solver limit {limit} s", model.columns.len(), model.rows.len());

    let run = run_external_solver(
        &model,
        &ExternalConfig {
            command,
            time_limit: Some(Duration::from_secs_f64(limit + 30.0)),
        },
    )?;
    let sol = &run.solution;
    for d in &run.diagnostics {
        println!("diagnostic: {d}");
    }
    println!("status {} after {:.1} s", sol.status, run.wall.as_secs_f64());
    if let (Some(obj), Some(bound)) = (sol.objective_reported, sol.bound) {
        println!("objective {obj:.2}, bound {bound:.2}, gap {:.3}%", 100.0 * relative_gap(obj, bound));
    }
    print!("{}", verify_solution(sol, &model, 1e-6));
    if sol.objective_reported.is_some() {
        println!("{}", breakdown_costs(sol, &model, &inst)?);
    }
    Ok(())
}
