use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::geo::Leg;
use crate::instance::{Echelon, Instance};

/// A continuous flow x on one leg. `size` is the destination facility's size
/// option; flows into sinks carry none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowKey {
    pub leg: Leg,
    pub period: usize,
    pub material: usize,
    pub origin: usize,
    pub dest: usize,
    pub size: Option<usize>,
}

/// Structured identity of a model column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    Flow(FlowKey),
    /// Binary b: facility `site` of `echelon` installed at size option `size`.
    Install {
        echelon: Echelon,
        site: usize,
        size: usize,
    },
}

impl VarKey {
    pub fn is_binary(&self) -> bool {
        matches!(self, VarKey::Install { .. })
    }

    pub fn as_flow(&self) -> Option<&FlowKey> {
        match self {
            VarKey::Flow(f) => Some(f),
            VarKey::Install { .. } => None,
        }
    }
}

/// Materials that get flow columns on a leg.
///
/// Unpruned: every material. Pruned: a leg into an echelon carries only its
/// inputs, a leg out of an echelon carries only its outputs.
pub fn leg_materials(inst: &Instance, leg: Leg, prune: bool) -> Vec<usize> {
    (0..inst.materials.len())
        .filter(|&p| {
            !prune
                || (leg.origin().is_none_or(|e| inst.echelon(e).produces(p))
                    && leg.destination().is_none_or(|e| inst.echelon(e).accepts(p)))
        })
        .collect()
}

/// Bijection between [`VarKey`] and column numbers.
#[derive(Debug, Clone)]
pub struct VariableIndex {
    keys: Vec<VarKey>,
    lookup: HashMap<VarKey, usize>,
    legs: [Range<usize>; 5],
    installs: Range<usize>,
}

impl VariableIndex {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, column: usize) -> &VarKey {
        &self.keys[column]
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }

    pub fn column(&self, key: &VarKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    pub fn leg_columns(&self, leg: Leg) -> Range<usize> {
        self.legs[leg.index()].clone()
    }

    pub fn install_columns(&self) -> Range<usize> {
        self.installs.clone()
    }

    pub fn flow_count(&self) -> usize {
        self.installs.start
    }

    pub fn binary_count(&self) -> usize {
        self.installs.len()
    }
}

fn check_nonempty(inst: &Instance) -> Result<()> {
    let empty = |what: &str| Err(Error::EmptyChainPosition(what.to_string()));
    if inst.periods.is_empty() {
        return empty("periods");
    }
    if inst.materials.is_empty() {
        return empty("materials");
    }
    if inst.sources.is_empty() {
        return empty("sources");
    }
    for e in Echelon::ALL {
        let spec = inst.echelon(e);
        if spec.candidate_sites.is_empty() {
            return empty(&format!("{e} sites"));
        }
        if spec.size_options.is_empty() {
            return empty(&format!("{e} size options"));
        }
    }
    if inst.sinks.is_empty() {
        return empty("sinks");
    }
    Ok(())
}

/// Lays out the column space: the five legs in chain order, each ordered
/// lexicographically by (period, material, origin, destination, size), then
/// all install binaries ordered by (echelon, site, size).
pub fn index_variables(inst: &Instance, prune: bool) -> Result<VariableIndex> {
    check_nonempty(inst)?;
    let mut keys = Vec::new();
    let mut legs: [Range<usize>; 5] = Default::default();
    for leg in Leg::ALL {
        let start = keys.len();
        let materials = leg_materials(inst, leg, prune);
        let n_orig = leg.origins(inst).len();
        let n_dest = leg.destinations(inst).len();
        let sizes: Vec<Option<usize>> = match leg.destination() {
            Some(e) => (0..inst.echelon(e).size_options.len()).map(Some).collect(),
            None => vec![None],
        };
        for period in 0..inst.periods.len() {
            for &material in &materials {
                for origin in 0..n_orig {
                    for dest in 0..n_dest {
                        for &size in &sizes {
                            keys.push(VarKey::Flow(FlowKey {
                                leg,
                                period,
                                material,
                                origin,
                                dest,
                                size,
                            }));
                        }
                    }
                }
            }
        }
        legs[leg.index()] = start..keys.len();
    }
    let start = keys.len();
    for echelon in Echelon::ALL {
        let spec = inst.echelon(echelon);
        for site in 0..spec.candidate_sites.len() {
            for size in 0..spec.size_options.len() {
                keys.push(VarKey::Install {
                    echelon,
                    site,
                    size,
                });
            }
        }
    }
    let installs = start..keys.len();
    let lookup = keys.iter().enumerate().map(|(c, k)| (*k, c)).collect();
    Ok(VariableIndex {
        keys,
        lookup,
        legs,
        installs,
    })
}
