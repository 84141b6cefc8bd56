use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::open_sizes;
use crate::error::Result;
use crate::instance::{Echelon, Instance};
use crate::milp::CanonicalMilp;
use crate::model_io::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteRole {
    Source,
    Facility(Echelon),
    Sink,
}

impl SiteRole {
    pub fn tag(self) -> &'static str {
        match self {
            SiteRole::Source => "source",
            SiteRole::Facility(e) => e.tag(),
            SiteRole::Sink => "sink",
        }
    }
}

impl Serialize for SiteRole {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutSite {
    pub role: SiteRole,
    pub id: String,
    pub lat: f64,
    pub lon: f64,
    /// Sources and sinks are always open.
    pub open: bool,
    pub size: Option<String>,
    pub capacity_tons: Option<f64>,
}

/// Every node of the network with its open/closed state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutExport {
    pub sites: Vec<LayoutSite>,
}

impl LayoutExport {
    /// Open candidate sites per echelon (CF, RTF, CPF, DPF).
    pub fn open_counts(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for s in &self.sites {
            if let (SiteRole::Facility(e), true) = (s.role, s.open) {
                out[e.index()] += 1;
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["role", "id", "lat", "lon", "open", "size", "capacity_tons"])?;
        for s in &self.sites {
            w.write_record([
                s.role.tag(),
                &s.id,
                &format!("{:.6}", s.lat),
                &format!("{:.6}", s.lon),
                if s.open { "1" } else { "0" },
                s.size.as_deref().unwrap_or(""),
                &s.capacity_tons.map_or(String::new(), |c| format!("{c:.6}")),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// GeoJSON FeatureCollection of points, one per site.
    pub fn to_geojson(&self) -> String {
        let round = |x: f64| (x * 1e6).round() / 1e6;
        let features: Vec<_> = self
            .sites
            .iter()
            .map(|s| {
                json!({
                    "type": "Feature",
                    "geometry": {"type": "Point", "coordinates": [round(s.lon), round(s.lat)]},
                    "properties": {
                        "role": s.role.tag(),
                        "id": s.id,
                        "open": s.open,
                        "size": s.size,
                        "capacity_tons": s.capacity_tons.map(round),
                    },
                })
            })
            .collect();
        serde_json::to_string_pretty(&json!({"type": "FeatureCollection", "features": features}))
            .expect("layout serializes")
    }
}

pub fn export_layout(sol: &Solution, model: &CanonicalMilp, inst: &Instance) -> LayoutExport {
    let open = open_sizes(sol, model, inst);
    let fixed = |role, n: &crate::instance::Node| LayoutSite {
        role,
        id: n.id.clone(),
        lat: n.lat,
        lon: n.lon,
        open: true,
        size: None,
        capacity_tons: None,
    };
    let mut sites: Vec<LayoutSite> = inst.sources.iter().map(|s| fixed(SiteRole::Source, &s.node)).collect();
    for e in Echelon::ALL {
        let spec = inst.echelon(e);
        for (k, n) in spec.candidate_sites.iter().enumerate() {
            let choice = open[e.index()][k].map(|c| &spec.size_options[c]);
            sites.push(LayoutSite {
                role: SiteRole::Facility(e),
                id: n.id.clone(),
                lat: n.lat,
                lon: n.lon,
                open: choice.is_some(),
                size: choice.map(|c| c.id.clone()),
                capacity_tons: choice.map(|c| c.max_capacity_tons),
            });
        }
    }
    sites.extend(inst.sinks.iter().map(|s| fixed(SiteRole::Sink, &s.node)));
    LayoutExport { sites }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{build_milp, BuildOptions};
    use crate::model_io::SolutionSource;
    use crate::scenario::hand_chain_instance;

    #[test]
    fn layout_follows_binaries() {
        let inst = hand_chain_instance();
        let model = build_milp(&inst, BuildOptions::default()).unwrap();
        let mut sol = Solution::zero(&model, SolutionSource::Oracle);
        let cf = model.column_by_name("bcf_cf1_std").unwrap();
        sol.values[cf] = 1.0;
        let layout = export_layout(&sol, &model, &inst);
        assert_eq!(layout.open_counts(), [1, 0, 0, 0]);
        assert_eq!(layout.sites.len(), 6);
        let geo: serde_json::Value = serde_json::from_str(&layout.to_geojson()).unwrap();
        assert_eq!(geo["features"].as_array().unwrap().len(), 6);
        assert_eq!(geo["features"][1]["properties"]["size"], "std");
    }
}
