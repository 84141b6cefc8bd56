//! Great-circle leg distances for an instance, as CSV.
//!
//! ```text
//! cargo run --example distances -- crates/core/examples/data/six_node.toml
//! ```

use upcycle_net::geo::{build_leg_matrices, haversine_km, Leg};
use upcycle_net::instance::parse_instance;
use upcycle_net::scenario::six_node_instance;

fn main() -> upcycle_net::Result<()> {
    let inst = match std::env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => six_node_instance(),
    };
    let legs = build_leg_matrices(&inst)?;
    for leg in Leg::ALL {
        println!("# {}", leg.tag());
        legs.leg(leg).write_csv(std::io::stdout())?;
    }
    let d = haversine_km((52.5200, 13.4050), (48.1351, 11.5820), 1.0)?;
    println!("# Berlin to Munich: {d:.1} km (circuity 1.3: {:.1} km)", d * 1.3);
    Ok(())
}
