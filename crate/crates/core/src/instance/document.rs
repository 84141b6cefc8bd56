//! TOML instance document: schema, parsing and serialization.
//!
//! The canonical schema is documented in `docs/instance-format.md`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{EchelonSpec, Instance, Material, Node, Period, Sink, SizeOption, Source, Units};
use crate::error::{Error, Result};
use crate::instance::Echelon;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default)]
    name: String,
    #[serde(default)]
    units: Units,
    materials: Vec<MaterialDoc>,
    periods: Vec<PeriodDoc>,
    #[serde(default)]
    transport_cost: BTreeMap<String, f64>,
    #[serde(default)]
    options: OptionsDoc,
    sources: Vec<SourceDoc>,
    sinks: Vec<SinkDoc>,
    echelons: EchelonsDoc,
    #[serde(default)]
    quota: Vec<QuotaDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialDoc {
    id: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PeriodDoc {
    id: String,
    duration_years: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsDoc {
    #[serde(default = "unit_circuity")]
    circuity_factor: f64,
}

fn unit_circuity() -> f64 {
    1.0
}

impl Default for OptionsDoc {
    fn default() -> Self {
        Self {
            circuity_factor: unit_circuity(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmountDoc {
    period: String,
    material: String,
    tons: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceDoc {
    id: String,
    lat: f64,
    lon: f64,
    #[serde(default)]
    supply: Vec<AmountDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SinkDoc {
    id: String,
    lat: f64,
    lon: f64,
    #[serde(default)]
    demand: Vec<AmountDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EchelonsDoc {
    cf: EchelonDoc,
    rtf: EchelonDoc,
    cpf: EchelonDoc,
    dpf: EchelonDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EchelonDoc {
    op_cost_per_ton: f64,
    input_materials: Vec<String>,
    output_materials: Vec<String>,
    yields: BTreeMap<String, f64>,
    sites: Vec<Node>,
    size_options: Vec<SizeOption>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotaDoc {
    period: String,
    material: String,
    eta: f64,
}

/// Parses an instance document and checks every per-field invariant.
///
/// Aggregate feasibility is not checked here; see
/// [`validate_instance`](super::validate_instance).
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    Resolver::new(&doc)?.resolve(doc)
}

/// Writes the canonical document for an instance. Parsing the output yields
/// an identical instance.
pub fn serialize_instance(inst: &Instance) -> String {
    let mat = |p: usize| inst.materials[p].id.clone();
    let per = |t: usize| inst.periods[t].id.clone();
    let amounts = |m: &BTreeMap<(usize, usize), f64>| {
        m.iter()
            .map(|(&(t, p), &tons)| AmountDoc {
                period: per(t),
                material: mat(p),
                tons,
            })
            .collect::<Vec<_>>()
    };
    let echelon = |e: Echelon| {
        let spec = inst.echelon(e);
        EchelonDoc {
            op_cost_per_ton: spec.op_cost_per_ton,
            input_materials: spec.input_materials.iter().map(|&p| mat(p)).collect(),
            output_materials: spec.output_materials.iter().map(|&p| mat(p)).collect(),
            yields: spec.yields.iter().map(|(&p, &g)| (mat(p), g)).collect(),
            sites: spec.candidate_sites.clone(),
            size_options: spec.size_options.clone(),
        }
    };
    let doc = InstanceDoc {
        name: inst.name.clone(),
        units: inst.units.clone(),
        materials: inst
            .materials
            .iter()
            .map(|m| MaterialDoc { id: m.id.clone() })
            .collect(),
        periods: inst
            .periods
            .iter()
            .map(|p| PeriodDoc {
                id: p.id.clone(),
                duration_years: p.duration_years,
            })
            .collect(),
        transport_cost: inst
            .transport_cost
            .iter()
            .map(|(&p, &c)| (mat(p), c))
            .collect(),
        options: OptionsDoc {
            circuity_factor: inst.circuity_factor,
        },
        sources: inst
            .sources
            .iter()
            .map(|s| SourceDoc {
                id: s.node.id.clone(),
                lat: s.node.lat,
                lon: s.node.lon,
                supply: amounts(&s.supply),
            })
            .collect(),
        sinks: inst
            .sinks
            .iter()
            .map(|s| SinkDoc {
                id: s.node.id.clone(),
                lat: s.node.lat,
                lon: s.node.lon,
                demand: amounts(&s.demand),
            })
            .collect(),
        echelons: EchelonsDoc {
            cf: echelon(Echelon::Cf),
            rtf: echelon(Echelon::Rtf),
            cpf: echelon(Echelon::Cpf),
            dpf: echelon(Echelon::Dpf),
        },
        quota: inst
            .quota
            .iter()
            .map(|(&(t, p), &eta)| QuotaDoc {
                period: per(t),
                material: mat(p),
                eta,
            })
            .collect(),
    };
    toml::to_string(&doc).expect("instance document is always representable in TOML")
}

struct Resolver {
    materials: Vec<String>,
    periods: Vec<String>,
}

impl Resolver {
    fn new(doc: &InstanceDoc) -> Result<Self> {
        let materials: Vec<String> = doc.materials.iter().map(|m| m.id.clone()).collect();
        let periods: Vec<String> = doc.periods.iter().map(|p| p.id.clone()).collect();
        unique("materials", materials.iter())?;
        unique("periods", periods.iter())?;
        Ok(Self { materials, periods })
    }

    fn material(&self, location: &str, id: &str) -> Result<usize> {
        self.materials
            .iter()
            .position(|m| m == id)
            .ok_or_else(|| Error::UnknownReference {
                location: location.to_string(),
                kind: "material",
                id: id.to_string(),
            })
    }

    fn period(&self, location: &str, id: &str) -> Result<usize> {
        self.periods
            .iter()
            .position(|p| p == id)
            .ok_or_else(|| Error::UnknownReference {
                location: location.to_string(),
                kind: "period",
                id: id.to_string(),
            })
    }

    fn amounts(
        &self,
        location: &str,
        entries: Vec<AmountDoc>,
    ) -> Result<BTreeMap<(usize, usize), f64>> {
        let mut out = BTreeMap::new();
        for (k, a) in entries.into_iter().enumerate() {
            let loc = format!("{location}[{k}]");
            let key = (self.period(&loc, &a.period)?, self.material(&loc, &a.material)?);
            nonneg(&loc, "tons", a.tons)?;
            if out.insert(key, a.tons).is_some() {
                return Err(Error::InvalidValue {
                    location: loc,
                    message: format!("second entry for ({}, {})", a.period, a.material),
                });
            }
        }
        Ok(out)
    }

    fn material_list(&self, location: &str, ids: &[String]) -> Result<Vec<usize>> {
        if ids.is_empty() {
            return Err(Error::InvalidValue {
                location: location.to_string(),
                message: "must list at least one material".into(),
            });
        }
        let mut out = ids
            .iter()
            .map(|id| self.material(location, id))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        if out.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidValue {
                location: location.to_string(),
                message: "lists a material twice".into(),
            });
        }
        Ok(out)
    }

    fn echelon(&self, e: Echelon, doc: EchelonDoc) -> Result<EchelonSpec> {
        let loc = format!("echelons.{}", e.tag());
        nonneg(&loc, "op_cost_per_ton", doc.op_cost_per_ton)?;
        let input_materials =
            self.material_list(&format!("{loc}.input_materials"), &doc.input_materials)?;
        let output_materials =
            self.material_list(&format!("{loc}.output_materials"), &doc.output_materials)?;
        let mut yields = BTreeMap::new();
        for (id, &g) in &doc.yields {
            let p = self.material(&format!("{loc}.yields"), id)?;
            if !output_materials.contains(&p) {
                return Err(Error::InvalidValue {
                    location: format!("{loc}.yields"),
                    message: format!("yield given for '{id}', which is not an output material"),
                });
            }
            nonneg(&format!("{loc}.yields.{id}"), "yield", g)?;
            yields.insert(p, g);
        }
        if let Some(&p) = output_materials.iter().find(|p| !yields.contains_key(p)) {
            return Err(Error::InvalidValue {
                location: format!("{loc}.yields"),
                message: format!("missing yield for output material '{}'", self.materials[p]),
            });
        }
        unique(&format!("{loc}.sites"), doc.sites.iter().map(|n| &n.id))?;
        for (k, n) in doc.sites.iter().enumerate() {
            check_node(&format!("{loc}.sites[{k}]"), n)?;
        }
        unique(
            &format!("{loc}.size_options"),
            doc.size_options.iter().map(|s| &s.id),
        )?;
        for (k, s) in doc.size_options.iter().enumerate() {
            let sloc = format!("{loc}.size_options[{k}] '{}'", s.id);
            nonneg(&sloc, "max_capacity_tons", s.max_capacity_tons)?;
            nonneg(&sloc, "install_cost_annual", s.install_cost_annual)?;
        }
        Ok(EchelonSpec {
            candidate_sites: doc.sites,
            size_options: doc.size_options,
            op_cost_per_ton: doc.op_cost_per_ton,
            input_materials,
            output_materials,
            yields,
        })
    }

    fn resolve(self, doc: InstanceDoc) -> Result<Instance> {
        let periods = doc
            .periods
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                if !(p.duration_years.is_finite() && p.duration_years > 0.0) {
                    return Err(Error::InvalidValue {
                        location: format!("periods[{k}] '{}'", p.id),
                        message: format!("duration_years must be > 0, got {}", p.duration_years),
                    });
                }
                Ok(Period {
                    id: p.id,
                    duration_years: p.duration_years,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        unique("sources", doc.sources.iter().map(|s| &s.id))?;
        let sources = doc
            .sources
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                let node = Node::new(s.id, s.lat, s.lon);
                let loc = format!("sources[{k}] '{}'", node.id);
                check_node(&loc, &node)?;
                let supply = self.amounts(&format!("{loc}.supply"), s.supply)?;
                Ok(Source { node, supply })
            })
            .collect::<Result<Vec<_>>>()?;

        unique("sinks", doc.sinks.iter().map(|s| &s.id))?;
        let sinks = doc
            .sinks
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                let node = Node::new(s.id, s.lat, s.lon);
                let loc = format!("sinks[{k}] '{}'", node.id);
                check_node(&loc, &node)?;
                let demand = self.amounts(&format!("{loc}.demand"), s.demand)?;
                Ok(Sink { node, demand })
            })
            .collect::<Result<Vec<_>>>()?;

        let EchelonsDoc { cf, rtf, cpf, dpf } = doc.echelons;
        let echelons = [
            self.echelon(Echelon::Cf, cf)?,
            self.echelon(Echelon::Rtf, rtf)?,
            self.echelon(Echelon::Cpf, cpf)?,
            self.echelon(Echelon::Dpf, dpf)?,
        ];

        let mut quota = BTreeMap::new();
        for (k, q) in doc.quota.into_iter().enumerate() {
            let loc = format!("quota[{k}]");
            let key = (self.period(&loc, &q.period)?, self.material(&loc, &q.material)?);
            if !(0.0..=1.0).contains(&q.eta) {
                return Err(Error::InvalidValue {
                    location: loc,
                    message: format!("eta must lie in [0, 1], got {}", q.eta),
                });
            }
            if quota.insert(key, q.eta).is_some() {
                return Err(Error::InvalidValue {
                    location: loc,
                    message: format!("second quota for ({}, {})", q.period, q.material),
                });
            }
        }

        let mut transport_cost = BTreeMap::new();
        for (id, &c) in &doc.transport_cost {
            let p = self.material("transport_cost", id)?;
            nonneg(&format!("transport_cost.{id}"), "cost", c)?;
            transport_cost.insert(p, c);
        }

        let circuity = doc.options.circuity_factor;
        if !(circuity.is_finite() && circuity >= 1.0) {
            return Err(Error::InvalidValue {
                location: "options.circuity_factor".into(),
                message: format!("must be a finite value >= 1, got {circuity}"),
            });
        }

        Ok(Instance {
            name: doc.name,
            units: doc.units,
            materials: self
                .materials
                .into_iter()
                .map(|id| Material { id })
                .collect(),
            periods,
            sources,
            sinks,
            echelons,
            quota,
            transport_cost,
            circuity_factor: circuity,
        })
    }
}

fn unique<'a>(set: &str, ids: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicateId {
                set: set.to_string(),
                id: id.clone(),
            });
        }
    }
    Ok(())
}

fn nonneg(location: &str, field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidValue {
            location: location.to_string(),
            message: format!("{field} must be a finite value >= 0, got {v}"),
        })
    }
}

fn check_node(location: &str, n: &Node) -> Result<()> {
    if !(n.lat.is_finite() && (-90.0..=90.0).contains(&n.lat)) {
        return Err(Error::InvalidValue {
            location: location.to_string(),
            message: format!("latitude {} outside [-90, 90]", n.lat),
        });
    }
    if !(n.lon.is_finite() && (-180.0..=180.0).contains(&n.lon)) {
        return Err(Error::InvalidValue {
            location: location.to_string(),
            message: format!("longitude {} outside [-180, 180]", n.lon),
        });
    }
    Ok(())
}
