//! The single-chain instance end to end: build, solve exactly, break down
//! the cost and list the flows.
//!
//! ```text
//! cargo run --example hand_chain
//! ```

use upcycle_net::milp::{build_milp, BuildOptions};
use upcycle_net::oracle::{solve_exact, OracleLimits};
use upcycle_net::report::{breakdown_costs, export_flows};
use upcycle_net::scenario::hand_chain_instance;

fn main() -> upcycle_net::Result<()> {
    let inst = hand_chain_instance();
    let model = build_milp(&inst, BuildOptions::default())?;
    println!("{} columns, {} rows", model.columns.len(), model.rows.len());

    let result = solve_exact(&inst, &model, &OracleLimits::default())?;
    println!("{}\n", result.certificate);
    println!("{}\n", breakdown_costs(&result.solution, &model, &inst)?);

    for row in export_flows(&result.solution, &model, &inst).rows {
        println!("{} {:<8} {:>5} -> {:<5} {} {:.1} t", row.period, row.leg, row.origin, row.destination, row.material, row.tons);
    }
    Ok(())
}
