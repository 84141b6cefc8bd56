use std::collections::HashSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::milp::{CanonicalMilp, Sense, VarKind, MAX_NAME_LEN};

const OBJECTIVE_ROW: &str = "cost";

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

fn check_names<'a>(what: &'static str, names: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if n.is_empty()
            || n.len() > MAX_NAME_LEN
            || n.chars().any(|c| c.is_whitespace() || !c.is_ascii())
            || n == OBJECTIVE_ROW
        {
            return Err(Error::InvalidName(n.clone()));
        }
        if !seen.insert(n) {
            return Err(Error::NameCollision {
                what,
                name: n.clone(),
            });
        }
    }
    Ok(())
}

/// Writes the model as free-format MPS.
///
/// Continuous columns come first, then every binary column inside a single
/// INTORG/INTEND block with a `BV` bound. Continuous columns keep the default
/// bounds [0, +inf). Output is byte-deterministic for a given model.
pub fn write_mps(m: &CanonicalMilp) -> Result<String> {
    check_names("column", m.col_names.iter())?;
    check_names("row", m.row_names.iter())?;

    let mut by_column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m.columns.len()];
    for (r, row) in m.rows.iter().enumerate() {
        for &(c, a) in &row.coefs {
            by_column[c].push((r, a));
        }
    }

    let mut s = String::new();
    writeln!(s, "NAME {}", m.meta.name).unwrap();
    writeln!(s, "ROWS").unwrap();
    writeln!(s, " N  {OBJECTIVE_ROW}").unwrap();
    for (r, row) in m.rows.iter().enumerate() {
        let tag = match row.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        writeln!(s, " {tag}  {}", m.row_names[r]).unwrap();
    }
    writeln!(s, "COLUMNS").unwrap();
    let write_column = |s: &mut String, c: usize| {
        let name = &m.col_names[c];
        let cost = m.columns[c].cost;
        if cost != 0.0 || by_column[c].is_empty() {
            writeln!(s, "    {name}  {OBJECTIVE_ROW}  {}", num(cost)).unwrap();
        }
        for &(r, a) in &by_column[c] {
            writeln!(s, "    {name}  {}  {}", m.row_names[r], num(a)).unwrap();
        }
    };
    let (binaries, continuous): (Vec<usize>, Vec<usize>) =
        (0..m.columns.len()).partition(|&c| m.columns[c].kind == VarKind::Binary);
    for &c in &continuous {
        write_column(&mut s, c);
    }
    if !binaries.is_empty() {
        writeln!(s, "    MARKER  'MARKER'  'INTORG'").unwrap();
        for &c in &binaries {
            write_column(&mut s, c);
        }
        writeln!(s, "    MARKER  'MARKER'  'INTEND'").unwrap();
    }
    writeln!(s, "RHS").unwrap();
    for (r, row) in m.rows.iter().enumerate() {
        if row.rhs != 0.0 {
            writeln!(s, "    RHS  {}  {}", m.row_names[r], num(row.rhs)).unwrap();
        }
    }
    writeln!(s, "BOUNDS").unwrap();
    for &c in &binaries {
        writeln!(s, " BV BND  {}", m.col_names[c]).unwrap();
    }
    writeln!(s, "ENDATA").unwrap();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{
        build_milp, index_variables, BuildOptions, Column, InstallCostMode, ModelMeta, VarKey,
    };
    use crate::scenario::hand_chain_instance;

    fn one_column_model() -> CanonicalMilp {
        let inst = hand_chain_instance();
        let index = index_variables(&inst, true).unwrap();
        let key = *index.key(0);
        CanonicalMilp::from_parts(
            ModelMeta {
                name: "single".into(),
                fingerprint: 0,
                options: BuildOptions {
                    prune: true,
                    install_cost_mode: InstallCostMode::Once,
                },
            },
            index,
            vec![Column {
                key,
                kind: VarKind::Continuous,
                cost: 1.5,
            }],
            vec![],
            vec!["x1".into()],
            vec![],
        )
    }

    #[test]
    fn minimal_document() {
        let text = write_mps(&one_column_model()).unwrap();
        assert_eq!(
            text,
            "NAME single\nROWS\n N  cost\nCOLUMNS\n    x1  cost  1.5\nRHS\nBOUNDS\nENDATA\n"
        );
    }

    #[test]
    fn binaries_sit_in_one_marker_block() {
        let inst = crate::scenario::six_node_instance();
        let m = build_milp(&inst, BuildOptions::default()).unwrap();
        let text = write_mps(&m).unwrap();
        assert_eq!(text.matches("'INTORG'").count(), 1);
        assert_eq!(text.matches("'INTEND'").count(), 1);
        let start = text.find("'INTORG'").unwrap();
        let end = text.find("'INTEND'").unwrap();
        let columns_end = text.find("\nRHS\n").unwrap();
        for (c, col) in m.columns.iter().enumerate() {
            let needle = format!("\n    {}  ", m.col_names[c]);
            let first = text.find(&needle).unwrap();
            let last = text[..columns_end].rfind(&needle).unwrap();
            let inside = first > start && last < end;
            assert_eq!(inside, matches!(col.key, VarKey::Install { .. }));
        }
        assert_eq!(text.matches(" BV BND ").count(), m.index.binary_count());
    }

    #[test]
    fn whitespace_in_name_is_rejected() {
        let mut m = one_column_model();
        m.col_names[0] = "x 1".into();
        assert!(matches!(write_mps(&m), Err(Error::InvalidName(_))));
    }
}
