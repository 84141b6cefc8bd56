//! Write the plot-ready report bundle (cost breakdown, per-leg flows,
//! facility loads, layout as CSV and GeoJSON) for an exactly solved instance.
//!
//! ```text
//! cargo run --example sankey_report -- target/report
//! ```

use std::path::PathBuf;

use upcycle_net::geo::Leg;
use upcycle_net::milp::{build_milp, BuildOptions};
use upcycle_net::oracle::{solve_exact, OracleLimits};
use upcycle_net::report::ReportBundle;
use upcycle_net::scenario::economies_of_scale_instance;

fn main() -> upcycle_net::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/report".into()));
    let inst = economies_of_scale_instance();
    let model = build_milp(&inst, BuildOptions::default())?;
    let sol = solve_exact(&inst, &model, &OracleLimits::default())?.solution;

    let bundle = ReportBundle::build(&sol, &model, &inst)?;
    for period in &inst.periods {
        for leg in Leg::ALL {
            for r in bundle.flows.rows_for(&period.id, leg) {
                println!("{} {:<8} {:>16} -> {:<16} {:<5} {:>8.2} t", r.period, r.leg, r.origin, r.destination, r.material, r.tons);
            }
        }
    }
    for f in &bundle.flows.facilities {
        println!("{:<4} {:<10} {} ({:.0} t/yr) load {:.0}%", f.echelon, f.site, f.size, f.annual_capacity_tons, 100.0 * f.utilization);
    }
    for path in bundle.write_to(&out, &inst)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
