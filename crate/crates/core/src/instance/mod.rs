//! Problem instance: node sets, materials, periods and every cost, capacity,
//! yield and policy parameter of the network design model.
//!
//! Instances are immutable once parsed. Materials and periods are referred to
//! by position everywhere inside the crate; string ids only appear at the
//! document boundary and in generated names.

mod document;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use document::{parse_instance, serialize_instance};
pub use validate::{validate_instance, Finding, Severity};

/// Facility echelons in chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Echelon {
    Cf,
    Rtf,
    Cpf,
    Dpf,
}

impl Echelon {
    pub const ALL: [Echelon; 4] = [Echelon::Cf, Echelon::Rtf, Echelon::Cpf, Echelon::Dpf];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short lowercase tag used in documents and generated names.
    pub fn tag(self) -> &'static str {
        match self {
            Echelon::Cf => "cf",
            Echelon::Rtf => "rtf",
            Echelon::Cpf => "cpf",
            Echelon::Dpf => "dpf",
        }
    }

    pub fn next(self) -> Option<Echelon> {
        match self {
            Echelon::Cf => Some(Echelon::Rtf),
            Echelon::Rtf => Some(Echelon::Cpf),
            Echelon::Cpf => Some(Echelon::Dpf),
            Echelon::Dpf => None,
        }
    }
}

impl fmt::Display for Echelon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Echelon::Cf => "CF",
            Echelon::Rtf => "RTF",
            Echelon::Cpf => "CPF",
            Echelon::Dpf => "DPF",
        })
    }
}

/// A geographic location with an id unique within its role set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub lat: f64,
    pub lon: f64,
}

impl Node {
    pub fn new(id: impl Into<String>, lat: f64, lon: f64) -> Self {
        Self {
            id: id.into(),
            lat,
            lon,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Period {
    pub id: String,
    /// Length of the period in years; weights operating and transport cost.
    pub duration_years: f64,
}

/// A discrete capacity tier for a candidate facility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeOption {
    pub id: String,
    /// Maximum total inflow (all materials) per period, in tons.
    pub max_capacity_tons: f64,
    pub install_cost_annual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EchelonSpec {
    pub candidate_sites: Vec<Node>,
    pub size_options: Vec<SizeOption>,
    pub op_cost_per_ton: f64,
    /// Material indices accepted as input, sorted ascending.
    pub input_materials: Vec<usize>,
    /// Material indices produced, sorted ascending.
    pub output_materials: Vec<usize>,
    /// Yield per output material (tons out per ton of admissible input).
    pub yields: BTreeMap<usize, f64>,
}

impl EchelonSpec {
    pub fn accepts(&self, material: usize) -> bool {
        self.input_materials.binary_search(&material).is_ok()
    }

    pub fn produces(&self, material: usize) -> bool {
        self.output_materials.binary_search(&material).is_ok()
    }

    pub fn yield_of(&self, material: usize) -> f64 {
        self.yields.get(&material).copied().unwrap_or(0.0)
    }

    /// Largest single-site capacity over the size ladder.
    pub fn max_site_capacity(&self) -> f64 {
        self.size_options
            .iter()
            .map(|s| s.max_capacity_tons)
            .fold(0.0, f64::max)
    }
}

/// A waste source with per-(period, material) supply in tons.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub node: Node,
    pub supply: BTreeMap<(usize, usize), f64>,
}

/// A consumer with per-(period, material) demand cap in tons.
#[derive(Debug, Clone, PartialEq)]
pub struct Sink {
    pub node: Node,
    pub demand: BTreeMap<(usize, usize), f64>,
}

/// Uninterpreted unit labels carried through to reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default = "default_currency")]
    pub currency: String,
    #[serde(default = "default_mass")]
    pub mass: String,
}

fn default_currency() -> String {
    "EUR".to_string()
}

fn default_mass() -> String {
    "t".to_string()
}

impl Default for Units {
    fn default() -> Self {
        Self {
            currency: default_currency(),
            mass: default_mass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub units: Units,
    pub materials: Vec<Material>,
    pub periods: Vec<Period>,
    pub sources: Vec<Source>,
    pub sinks: Vec<Sink>,
    /// Facility echelons indexed by [`Echelon::index`].
    pub echelons: [EchelonSpec; 4],
    /// Minimum collected fraction per (period, material); absent means 0.
    pub quota: BTreeMap<(usize, usize), f64>,
    /// Cost per ton-km per material.
    pub transport_cost: BTreeMap<usize, f64>,
    pub circuity_factor: f64,
}

impl Instance {
    pub fn echelon(&self, e: Echelon) -> &EchelonSpec {
        &self.echelons[e.index()]
    }

    pub fn supply(&self, period: usize, material: usize, source: usize) -> f64 {
        self.sources[source]
            .supply
            .get(&(period, material))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn demand(&self, period: usize, material: usize, sink: usize) -> f64 {
        self.sinks[sink]
            .demand
            .get(&(period, material))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn quota(&self, period: usize, material: usize) -> f64 {
        self.quota.get(&(period, material)).copied().unwrap_or(0.0)
    }

    /// Σ_i σ_tpi.
    pub fn total_supply(&self, period: usize, material: usize) -> f64 {
        (0..self.sources.len())
            .map(|i| self.supply(period, material, i))
            .sum()
    }

    /// Tonnage the quota forces into collection for (period, material).
    pub fn quota_tonnage(&self, period: usize, material: usize) -> f64 {
        self.quota(period, material) * self.total_supply(period, material)
    }

    pub fn horizon_years(&self) -> f64 {
        self.periods.iter().map(|p| p.duration_years).sum()
    }

    pub fn material_index(&self, id: &str) -> Option<usize> {
        self.materials.iter().position(|m| m.id == id)
    }

    pub fn period_index(&self, id: &str) -> Option<usize> {
        self.periods.iter().position(|p| p.id == id)
    }
}
