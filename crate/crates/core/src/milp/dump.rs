//! Row-oriented text listing of a canonical model, for humans and golden
//! files.

use std::fmt::Write;

use super::{CanonicalMilp, RowKey, VarKind};

fn describe(key: &RowKey) -> String {
    match *key {
        RowKey::Demand {
            period,
            material,
            sink,
        } => format!("Demand(t={period},p={material},n={sink})"),
        RowKey::Quota { period, material } => format!("Quota(t={period},p={material})"),
        RowKey::SourceCap {
            period,
            material,
            source,
        } => format!("SourceCap(t={period},p={material},i={source})"),
        RowKey::FlowBalance {
            echelon,
            period,
            material,
            site,
        } => format!("FlowBalance({echelon},t={period},p={material},site={site})"),
        RowKey::FacilityCap {
            echelon,
            period,
            site,
            size,
        } => format!("FacilityCap({echelon},t={period},site={site},c={size})"),
        RowKey::OneSize { echelon, site } => format!("OneSize({echelon},site={site})"),
    }
}

/// Writes the LP-style listing: header, objective terms, one block per row,
/// then the binary columns.
pub fn write_dump(m: &CanonicalMilp) -> String {
    let mut s = String::new();
    let o = &m.meta.options;
    writeln!(
        s,
        "model {} fingerprint {:016x} prune={} install_cost_mode={}",
        m.meta.name,
        m.meta.fingerprint,
        if o.prune { "on" } else { "off" },
        o.install_cost_mode.tag()
    )
    .unwrap();
    writeln!(
        s,
        "columns {} rows {} nonzeros {}",
        m.columns.len(),
        m.rows.len(),
        m.nonzeros()
    )
    .unwrap();
    writeln!(s, "minimize").unwrap();
    for (c, col) in m.columns.iter().enumerate() {
        if col.cost != 0.0 {
            writeln!(s, "  {} {}", m.col_names[c], col.cost).unwrap();
        }
    }
    writeln!(s, "subject to").unwrap();
    for (r, row) in m.rows.iter().enumerate() {
        writeln!(
            s,
            "{} {} {} {}",
            m.row_names[r],
            describe(&row.key),
            row.sense,
            row.rhs
        )
        .unwrap();
        for &(c, a) in &row.coefs {
            writeln!(s, "  {} {}", m.col_names[c], a).unwrap();
        }
    }
    writeln!(s, "binaries").unwrap();
    for (c, col) in m.columns.iter().enumerate() {
        if col.kind == VarKind::Binary {
            writeln!(s, "  {}", m.col_names[c]).unwrap();
        }
    }
    writeln!(s, "end").unwrap();
    s
}
