//! Build the canonical MILP and export it as free-format MPS plus a
//! human-readable dump, with and without material pruning.
//!
//! ```text
//! cargo run --example build_mps -- crates/core/examples/data/six_node.toml out/
//! ```

use std::path::PathBuf;

use upcycle_net::instance::parse_instance;
use upcycle_net::milp::{build_milp, write_dump, BuildOptions, Family};
use upcycle_net::model_io::write_mps;
use upcycle_net::scenario::six_node_instance;

fn main() -> upcycle_net::Result<()> {
    let mut args = std::env::args().skip(1);
    let inst = match args.next() {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => six_node_instance(),
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "target/build_mps".into()));
    std::fs::create_dir_all(&out)?;

    for prune in [true, false] {
        let model = build_milp(&inst, BuildOptions { prune, ..BuildOptions::default() })?;
        let tag = if prune { "pruned" } else { "unpruned" };
        println!(
            "{tag}: {} columns ({} binary), {} rows, {} nonzeros",
            model.columns.len(),
            model.binary_columns().count(),
            model.rows.len(),
            model.nonzeros()
        );
        for family in Family::ALL {
            println!("  {family:<12} {}", model.row_count(family));
        }
        std::fs::write(out.join(format!("{tag}.mps")), write_mps(&model)?)?;
        std::fs::write(out.join(format!("{tag}.txt")), write_dump(&model))?;
    }
    println!("wrote {}", out.display());
    Ok(())
}
