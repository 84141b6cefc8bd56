//! Generate the Germany-sized synthetic pack and report model dimensions.
//!
//! ```text
//! cargo run --release --example case_study_scale -- [seed]
//! ```

use std::time::Instant;

use upcycle_net::instance::validate_instance;
use upcycle_net::milp::{build_milp, BuildOptions};
use upcycle_net::scenario::{generate, GenSpec};

fn main() -> upcycle_net::Result<()> {
    let mut spec = GenSpec::default();
    if let Some(seed) = std::env::args().nth(1) {
        spec.seed = seed.parse().expect("seed is an integer");
    }
    let inst = generate(&spec)?;
    let findings = validate_instance(&inst);
    println!(
        "{}: {} sources, sites {:?}, {} sinks, {} periods, {} finding(s)",
        inst.name,
        inst.sources.len(),
        inst.echelons.each_ref().map(|e| e.candidate_sites.len()),
        inst.sinks.len(),
        inst.periods.len(),
        findings.len()
    );
    for prune in [true, false] {
        let start = Instant::now();
        let m = build_milp(&inst, BuildOptions { prune, ..BuildOptions::default() })?;
        let binaries = m.binary_columns().count();
        println!(
            "prune={prune}: {binaries} binaries, {} continuous, {} rows, {} nonzeros ({:.1} s)",
            m.columns.len() - binaries,
            m.rows.len(),
            m.nonzeros(),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
