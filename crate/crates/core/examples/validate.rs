//! Screen an instance document before building a model.
//!
//! ```text
//! cargo run --example validate -- crates/core/examples/data/six_node.toml
//! ```
//!
//! Without an argument the bundled hand-chain instance is screened twice:
//! as shipped, and with its CF shrunk below the collection quota.

use upcycle_net::instance::{parse_instance, validate_instance, Instance};
use upcycle_net::scenario::hand_chain_instance;

fn screen(label: &str, inst: &Instance) {
    let findings = validate_instance(inst);
    let errors = findings.iter().filter(|f| f.is_error()).count();
    println!("{label}: {errors} error(s), {} warning(s)", findings.len() - errors);
    for f in &findings {
        println!("  {f}");
    }
}

fn main() -> upcycle_net::Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        let inst = parse_instance(&std::fs::read_to_string(&path)?)?;
        screen(&path, &inst);
        return Ok(());
    }
    let inst = hand_chain_instance();
    screen("hand-chain", &inst);
    let mut small = inst.clone();
    small.echelons[0].size_options[0].max_capacity_tons = 6.0;
    screen("hand-chain with a 6 t CF", &small);
    Ok(())
}
