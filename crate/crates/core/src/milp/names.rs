//! Deterministic ASCII names for columns and rows.
//!
//! Ids are sanitized by mapping every non-alphanumeric character to '-', and
//! parts are joined with '_', so a name splits back into its parts
//! unambiguously. Distinct ids that sanitize to the same text are reported as
//! collisions by the model builder rather than renamed.

use super::{RowKey, VarKey};
use crate::error::{Error, Result};
use crate::geo::Leg;
use crate::instance::Instance;

pub const MAX_NAME_LEN: usize = 64;

pub fn sanitize_id(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

fn join(parts: &[&str]) -> Result<String> {
    let name = parts
        .iter()
        .enumerate()
        .map(|(k, p)| if k == 0 { p.to_string() } else { sanitize_id(p) })
        .collect::<Vec<_>>()
        .join("_");
    if name.len() > MAX_NAME_LEN {
        return Err(Error::InvalidName(name));
    }
    Ok(name)
}

fn leg_tag(leg: Leg) -> &'static str {
    match leg {
        Leg::SrcCf => "xsc",
        Leg::CfRtf => "xcr",
        Leg::RtfCpf => "xrp",
        Leg::CpfDpf => "xpd",
        Leg::DpfSink => "xdn",
    }
}

pub fn column_name(inst: &Instance, key: &VarKey) -> Result<String> {
    match *key {
        VarKey::Flow(f) => {
            let origins = f.leg.origins(inst);
            let dests = f.leg.destinations(inst);
            let mut parts = vec![
                leg_tag(f.leg),
                inst.periods[f.period].id.as_str(),
                inst.materials[f.material].id.as_str(),
                origins[f.origin].id.as_str(),
                dests[f.dest].id.as_str(),
            ];
            if let (Some(e), Some(c)) = (f.leg.destination(), f.size) {
                parts.push(inst.echelon(e).size_options[c].id.as_str());
            }
            join(&parts)
        }
        VarKey::Install {
            echelon,
            site,
            size,
        } => {
            let spec = inst.echelon(echelon);
            let tag = format!("b{}", echelon.tag());
            join(&[
                &tag,
                &spec.candidate_sites[site].id,
                &spec.size_options[size].id,
            ])
        }
    }
}

pub fn row_name(inst: &Instance, key: &RowKey) -> Result<String> {
    let per = |t: usize| inst.periods[t].id.as_str();
    let mat = |p: usize| inst.materials[p].id.as_str();
    match *key {
        RowKey::Demand {
            period,
            material,
            sink,
        } => join(&["dem", per(period), mat(material), &inst.sinks[sink].node.id]),
        RowKey::Quota { period, material } => join(&["quo", per(period), mat(material)]),
        RowKey::SourceCap {
            period,
            material,
            source,
        } => join(&["src", per(period), mat(material), &inst.sources[source].node.id]),
        RowKey::FlowBalance {
            echelon,
            period,
            material,
            site,
        } => join(&[
            &format!("bal{}", echelon.tag()),
            per(period),
            mat(material),
            &inst.echelon(echelon).candidate_sites[site].id,
        ]),
        RowKey::FacilityCap {
            echelon,
            period,
            site,
            size,
        } => {
            let spec = inst.echelon(echelon);
            join(&[
                &format!("cap{}", echelon.tag()),
                per(period),
                &spec.candidate_sites[site].id,
                &spec.size_options[size].id,
            ])
        }
        RowKey::OneSize { echelon, site } => join(&[
            &format!("one{}", echelon.tag()),
            &inst.echelon(echelon).candidate_sites[site].id,
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{build_milp, BuildOptions};
    use crate::scenario::hand_chain_instance;

    #[test]
    fn sanitizes_punctuation_and_whitespace() {
        assert_eq!(sanitize_id("Köln Süd_2.b"), "K-ln-S-d-2-b");
    }

    #[test]
    fn hand_chain_names() {
        let inst = hand_chain_instance();
        let m = build_milp(&inst, BuildOptions::default()).unwrap();
        assert_eq!(m.col_names[0], "xsc_t1_waste_s1_cf1_std");
        assert_eq!(m.col_names[4], "xdn_t1_waste_dpf1_n1");
        assert_eq!(m.col_names[5], "bcf_cf1_std");
    }

    #[test]
    fn sanitization_collision_aborts() {
        let mut inst = hand_chain_instance();
        let mut twin = inst.echelons[0].candidate_sites[0].clone();
        inst.echelons[0].candidate_sites[0].id = "cf.1".into();
        twin.id = "cf-1".into();
        inst.echelons[0].candidate_sites.push(twin);
        assert!(matches!(
            build_milp(&inst, BuildOptions::default()),
            Err(Error::NameCollision { .. })
        ));
    }

    #[test]
    fn overlong_name_is_rejected() {
        let mut inst = hand_chain_instance();
        inst.sinks[0].node.id = "n".repeat(70);
        assert!(matches!(
            build_milp(&inst, BuildOptions::default()),
            Err(Error::InvalidName(_))
        ));
    }
}
