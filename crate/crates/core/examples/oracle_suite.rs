//! Solve the desk-scale suite exactly, optionally cross-checking an external
//! solver.
//!
//! ```text
//! cargo run --release --example oracle_suite
//! cargo run --release --example oracle_suite -- \
//!     "python3 crates/core/scripts/scipy_mps_solve.py {mps} {sol} {time_limit}"
//! ```

use std::time::Instant;

use upcycle_net::milp::{build_milp, BuildOptions};
use upcycle_net::model_io::{run_external_solver, verify_solution, ExternalConfig, SolveStatus};
use upcycle_net::oracle::{solve_exact, OracleLimits};
use upcycle_net::scenario::make_tiny_suite;

fn main() -> upcycle_net::Result<()> {
    let solver = std::env::args().nth(1);
    let start = Instant::now();
    let mut disagreements = 0;
    for inst in make_tiny_suite(2024) {
        let model = build_milp(&inst, BuildOptions::default())?;
        let exact = solve_exact(&inst, &model, &OracleLimits::default())?;
        let cert = &exact.certificate;
        let objective = cert
            .best_objective
            .map_or_else(|| "infeasible".to_string(), |o| format!("{o:.6}"));
        print!(
            "{:<20} configs {:>4} pruned {:>4} objective {objective}",
            inst.name, cert.enumerated, cert.pruned
        );
        if let Some(command) = &solver {
            let run = run_external_solver(
                &model,
                &ExternalConfig {
                    command: command.clone(),
                    time_limit: None,
                },
            )?;
            let ext = &run.solution;
            let agree = match (ext.status, cert.best_objective) {
                (SolveStatus::Optimal, Some(o)) => {
                    let e = ext.objective(&model);
                    (e - o).abs() <= 1e-6 * o.abs().max(1.0) && verify_solution(ext, &model, 1e-6).pass
                }
                (SolveStatus::Infeasible, None) => true,
                _ => false,
            };
            disagreements += usize::from(!agree);
            print!("  external {} {}", ext.status, if agree { "agrees" } else { "DISAGREES" });
        }
        println!();
    }
    println!("done in {:.2} s, {disagreements} disagreement(s)", start.elapsed().as_secs_f64());
    Ok(())
}
