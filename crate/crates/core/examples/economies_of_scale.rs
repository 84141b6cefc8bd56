//! Expensive raw-waste haulage plus economies of scale in chemical
//! processing: the exact optimum collects locally and processes centrally.
//!
//! ```text
//! cargo run --example economies_of_scale
//! ```

use upcycle_net::milp::{build_milp, BuildOptions};
use upcycle_net::oracle::{solve_exact, OracleLimits};
use upcycle_net::report::{breakdown_costs, export_layout};
use upcycle_net::scenario::economies_of_scale_instance;

fn main() -> upcycle_net::Result<()> {
    let inst = economies_of_scale_instance();
    let model = build_milp(&inst, BuildOptions::default())?;
    let result = solve_exact(&inst, &model, &OracleLimits::default())?;
    println!("{}\n", result.certificate);
    println!("{}\n", breakdown_costs(&result.solution, &model, &inst)?);

    let layout = export_layout(&result.solution, &model, &inst);
    for site in layout.sites.iter().filter(|s| s.open) {
        println!("{:<6} {:<18} {}", site.role.tag(), site.id, site.size.as_deref().unwrap_or(""));
    }
    let [cf, rtf, cpf, dpf] = layout.open_counts();
    println!("\nopen: {cf} CF, {rtf} RTF, {cpf} CPF, {dpf} DPF");
    Ok(())
}
