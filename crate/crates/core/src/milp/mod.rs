//! Canonical sparse MILP for the network design problem.
//!
//! Columns are continuous flows on the five legs plus one binary per
//! (facility site, size option). The objective charges installation,
//! per-ton operating cost on facility inflow, and round-trip transport. Row
//! families:
//!
//! | family        | sense | one row per                                  |
//! |---------------|-------|----------------------------------------------|
//! | `Demand`      | ≤     | (period, material, sink)                     |
//! | `Quota`       | ≥     | (period, material) with η > 0                |
//! | `SourceCap`   | ≤     | (period, material, source)                   |
//! | `FlowBalance` | =     | (echelon, period, output material, site)     |
//! | `FacilityCap` | ≤     | (echelon, period, site, size)                |
//! | `OneSize`     | ≤     | (echelon, site)                              |
//!
//! Demand rows are upper bounds: sinks cap what they take, and the collection
//! quota is what drives activity through the chain.

mod dump;
mod index;
mod names;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geo::{build_leg_matrices, Leg, LegMatrices};
use crate::instance::{serialize_instance, Echelon, Instance};

pub use dump::write_dump;
pub use index::{index_variables, leg_materials, FlowKey, VarKey, VariableIndex};
pub use names::{column_name, row_name, sanitize_id, MAX_NAME_LEN};

/// How the annualized installation cost enters the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InstallCostMode {
    /// α^I × Σ_t ΔT_t: the annualized cost over the whole horizon.
    #[default]
    AnnualizedTimesHorizon,
    /// α^I once, regardless of horizon length.
    Once,
}

impl InstallCostMode {
    pub fn tag(self) -> &'static str {
        match self {
            InstallCostMode::AnnualizedTimesHorizon => "annualized_times_horizon",
            InstallCostMode::Once => "once",
        }
    }

    pub fn factor(self, inst: &Instance) -> f64 {
        match self {
            InstallCostMode::AnnualizedTimesHorizon => inst.horizon_years(),
            InstallCostMode::Once => 1.0,
        }
    }
}

impl std::str::FromStr for InstallCostMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "annualized_times_horizon" => Ok(InstallCostMode::AnnualizedTimesHorizon),
            "once" => Ok(InstallCostMode::Once),
            other => Err(format!(
                "unknown install cost mode '{other}' (expected annualized_times_horizon or once)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Restrict flow columns to leg-admissible materials.
    pub prune: bool,
    pub install_cost_mode: InstallCostMode,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            prune: true,
            install_cost_mode: InstallCostMode::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Continuous, bounded below by zero.
    Continuous,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// Constraint family of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Demand,
    Quota,
    SourceCap,
    FlowBalance,
    FacilityCap,
    OneSize,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Demand,
        Family::Quota,
        Family::SourceCap,
        Family::FlowBalance,
        Family::FacilityCap,
        Family::OneSize,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Structured identity of a model row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowKey {
    Demand {
        period: usize,
        material: usize,
        sink: usize,
    },
    Quota {
        period: usize,
        material: usize,
    },
    SourceCap {
        period: usize,
        material: usize,
        source: usize,
    },
    FlowBalance {
        echelon: Echelon,
        period: usize,
        material: usize,
        site: usize,
    },
    FacilityCap {
        echelon: Echelon,
        period: usize,
        site: usize,
        size: usize,
    },
    OneSize {
        echelon: Echelon,
        site: usize,
    },
}

impl RowKey {
    pub fn family(&self) -> Family {
        match self {
            RowKey::Demand { .. } => Family::Demand,
            RowKey::Quota { .. } => Family::Quota,
            RowKey::SourceCap { .. } => Family::SourceCap,
            RowKey::FlowBalance { .. } => Family::FlowBalance,
            RowKey::FacilityCap { .. } => Family::FacilityCap,
            RowKey::OneSize { .. } => Family::OneSize,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub key: VarKey,
    pub kind: VarKind,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: RowKey,
    pub sense: Sense,
    pub rhs: f64,
    /// (column, coefficient), ascending by column, no zeros, no duplicates.
    pub coefs: Vec<(usize, f64)>,
}

impl Row {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coefs.iter().map(|&(c, a)| a * values[c]).sum()
    }

    /// Amount by which `values` violate the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub name: String,
    /// FNV-1a 64 of the canonical instance document.
    pub fingerprint: u64,
    pub options: BuildOptions,
}

/// Solver-independent sparse MILP: minimize Σ cost·x subject to the rows,
/// continuous columns ≥ 0, binaries in {0, 1}.
#[derive(Debug, Clone)]
pub struct CanonicalMilp {
    pub meta: ModelMeta,
    pub index: VariableIndex,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub col_names: Vec<String>,
    pub row_names: Vec<String>,
    name_lookup: HashMap<String, usize>,
}

impl CanonicalMilp {
    pub fn column_by_name(&self, name: &str) -> Option<usize> {
        self.name_lookup.get(name).copied()
    }

    pub fn objective(&self, values: &[f64]) -> f64 {
        self.columns
            .iter()
            .zip(values)
            .map(|(c, v)| c.cost * v)
            .sum()
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coefs.len()).sum()
    }

    pub fn binary_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == VarKind::Binary)
            .map(|(k, _)| k)
    }

    pub fn row_count(&self, family: Family) -> usize {
        self.rows.iter().filter(|r| r.key.family() == family).count()
    }
}

pub fn fingerprint(inst: &Instance) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in serialize_instance(inst).bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Objective coefficients, one per column of `index`.
///
/// Install(site, size): α^I of that size times the install-mode factor.
/// Flow into a facility: ΔT_t·α^o + 2·ΔT_t·D·t_p. Flow into a sink:
/// 2·ΔT_t·D·t_p.
pub fn build_objective(
    inst: &Instance,
    index: &VariableIndex,
    dists: &LegMatrices,
    mode: InstallCostMode,
) -> Result<Vec<f64>> {
    let install_factor = mode.factor(inst);
    index
        .keys()
        .iter()
        .map(|key| match *key {
            VarKey::Install {
                echelon,
                site: _,
                size,
            } => Ok(inst.echelon(echelon).size_options[size].install_cost_annual * install_factor),
            VarKey::Flow(f) => {
                let tp = *inst
                    .transport_cost
                    .get(&f.material)
                    .ok_or_else(|| Error::MissingTransportCost(inst.materials[f.material].id.clone()))?;
                let dt = inst.periods[f.period].duration_years;
                let d = dists.leg(f.leg).get(f.origin, f.dest);
                let operating = f
                    .leg
                    .destination()
                    .map_or(0.0, |e| dt * inst.echelon(e).op_cost_per_ton);
                Ok(operating + 2.0 * dt * d * tp)
            }
        })
        .collect()
}

struct RowBuilder {
    rows: Vec<Row>,
    lookup: HashMap<RowKey, usize>,
}

impl RowBuilder {
    fn push(&mut self, key: RowKey, sense: Sense, rhs: f64) {
        self.lookup.insert(key, self.rows.len());
        self.rows.push(Row {
            key,
            sense,
            rhs,
            coefs: Vec::new(),
        });
    }

    fn add(&mut self, key: RowKey, column: usize, coef: f64) {
        if coef == 0.0 {
            return;
        }
        if let Some(&r) = self.lookup.get(&key) {
            self.rows[r].coefs.push((column, coef));
        }
    }

    fn add_required(&mut self, key: RowKey, column: usize, coef: f64) {
        assert!(
            self.lookup.contains_key(&key),
            "row {key:?} missing for column {column}"
        );
        self.add(key, column, coef);
    }
}

/// Generates every constraint row for the given column space.
pub fn build_rows(inst: &Instance, index: &VariableIndex, prune: bool) -> Vec<Row> {
    let n_t = inst.periods.len();
    let n_p = inst.materials.len();
    let mut b = RowBuilder {
        rows: Vec::new(),
        lookup: HashMap::new(),
    };

    let sink_mats = leg_materials(inst, Leg::DpfSink, prune);
    for period in 0..n_t {
        for material in 0..n_p {
            for (sink, s) in inst.sinks.iter().enumerate() {
                if s.demand.contains_key(&(period, material)) || sink_mats.contains(&material) {
                    b.push(
                        RowKey::Demand {
                            period,
                            material,
                            sink,
                        },
                        Sense::Le,
                        inst.demand(period, material, sink),
                    );
                }
            }
        }
    }
    for period in 0..n_t {
        for material in 0..n_p {
            let eta = inst.quota(period, material);
            if eta > 0.0 {
                b.push(
                    RowKey::Quota { period, material },
                    Sense::Ge,
                    eta * inst.total_supply(period, material),
                );
            }
        }
    }
    let src_mats = leg_materials(inst, Leg::SrcCf, prune);
    for period in 0..n_t {
        for material in 0..n_p {
            for source in 0..inst.sources.len() {
                let sigma = inst.supply(period, material, source);
                if sigma > 0.0 || src_mats.contains(&material) {
                    b.push(
                        RowKey::SourceCap {
                            period,
                            material,
                            source,
                        },
                        Sense::Le,
                        sigma,
                    );
                }
            }
        }
    }
    for echelon in Echelon::ALL {
        let spec = inst.echelon(echelon);
        for period in 0..n_t {
            for &material in &spec.output_materials {
                for site in 0..spec.candidate_sites.len() {
                    b.push(
                        RowKey::FlowBalance {
                            echelon,
                            period,
                            material,
                            site,
                        },
                        Sense::Eq,
                        0.0,
                    );
                }
            }
        }
    }
    for echelon in Echelon::ALL {
        let spec = inst.echelon(echelon);
        for period in 0..n_t {
            for site in 0..spec.candidate_sites.len() {
                for size in 0..spec.size_options.len() {
                    b.push(
                        RowKey::FacilityCap {
                            echelon,
                            period,
                            site,
                            size,
                        },
                        Sense::Le,
                        0.0,
                    );
                }
            }
        }
    }
    for echelon in Echelon::ALL {
        for site in 0..inst.echelon(echelon).candidate_sites.len() {
            b.push(RowKey::OneSize { echelon, site }, Sense::Le, 1.0);
        }
    }

    for (col, key) in index.keys().iter().enumerate() {
        match *key {
            VarKey::Flow(f) => {
                let (period, material) = (f.period, f.material);
                match f.leg.origin() {
                    None => {
                        b.add_required(
                            RowKey::SourceCap {
                                period,
                                material,
                                source: f.origin,
                            },
                            col,
                            1.0,
                        );
                        b.add(RowKey::Quota { period, material }, col, 1.0);
                    }
                    Some(e) => {
                        if inst.echelon(e).produces(material) {
                            b.add_required(
                                RowKey::FlowBalance {
                                    echelon: e,
                                    period,
                                    material,
                                    site: f.origin,
                                },
                                col,
                                -1.0,
                            );
                        }
                    }
                }
                match f.leg.destination() {
                    None => b.add_required(
                        RowKey::Demand {
                            period,
                            material,
                            sink: f.dest,
                        },
                        col,
                        1.0,
                    ),
                    Some(e) => {
                        let spec = inst.echelon(e);
                        if spec.accepts(material) {
                            for &out in &spec.output_materials {
                                b.add_required(
                                    RowKey::FlowBalance {
                                        echelon: e,
                                        period,
                                        material: out,
                                        site: f.dest,
                                    },
                                    col,
                                    spec.yield_of(out),
                                );
                            }
                        }
                        b.add_required(
                            RowKey::FacilityCap {
                                echelon: e,
                                period,
                                site: f.dest,
                                size: f.size.expect("facility-bound flow carries a size"),
                            },
                            col,
                            1.0,
                        );
                    }
                }
            }
            VarKey::Install {
                echelon,
                site,
                size,
            } => {
                let theta = inst.echelon(echelon).size_options[size].max_capacity_tons;
                for period in 0..n_t {
                    b.add_required(
                        RowKey::FacilityCap {
                            echelon,
                            period,
                            site,
                            size,
                        },
                        col,
                        -theta,
                    );
                }
                b.add_required(RowKey::OneSize { echelon, site }, col, 1.0);
            }
        }
    }
    b.rows
}

/// Builds the full model. Identical instance and options give an identical
/// model, including column and row order.
pub fn build_milp(inst: &Instance, options: BuildOptions) -> Result<CanonicalMilp> {
    let index = index_variables(inst, options.prune)?;
    let dists = build_leg_matrices(inst)?;
    let costs = build_objective(inst, &index, &dists, options.install_cost_mode)?;
    let rows = build_rows(inst, &index, options.prune);

    let columns: Vec<Column> = index
        .keys()
        .iter()
        .zip(costs)
        .map(|(key, cost)| Column {
            key: *key,
            kind: if key.is_binary() {
                VarKind::Binary
            } else {
                VarKind::Continuous
            },
            cost,
        })
        .collect();

    let col_names = index
        .keys()
        .iter()
        .map(|k| column_name(inst, k))
        .collect::<Result<Vec<_>>>()?;
    let row_names = rows
        .iter()
        .map(|r| row_name(inst, &r.key))
        .collect::<Result<Vec<_>>>()?;
    let mut name_lookup = HashMap::with_capacity(col_names.len());
    for (c, n) in col_names.iter().enumerate() {
        if name_lookup.insert(n.clone(), c).is_some() {
            return Err(Error::NameCollision {
                what: "column",
                name: n.clone(),
            });
        }
    }
    let mut seen = std::collections::HashSet::with_capacity(row_names.len());
    for n in &row_names {
        if !seen.insert(n.as_str()) {
            return Err(Error::NameCollision {
                what: "row",
                name: n.clone(),
            });
        }
    }

    Ok(CanonicalMilp {
        meta: ModelMeta {
            name: if inst.name.is_empty() {
                "upcycle-net".to_string()
            } else {
                sanitize_id(&inst.name)
            },
            fingerprint: fingerprint(inst),
            options,
        },
        index,
        columns,
        rows,
        col_names,
        row_names,
        name_lookup,
    })
}

impl CanonicalMilp {
    /// Assembles a model from parts. Names must be unique.
    pub fn from_parts(
        meta: ModelMeta,
        index: VariableIndex,
        columns: Vec<Column>,
        rows: Vec<Row>,
        col_names: Vec<String>,
        row_names: Vec<String>,
    ) -> Self {
        let name_lookup = col_names
            .iter()
            .enumerate()
            .map(|(c, n)| (n.clone(), c))
            .collect();
        Self {
            meta,
            index,
            columns,
            rows,
            col_names,
            row_names,
            name_lookup,
        }
    }
}
