//! Exact desk-scale solver.
//!
//! Every facility configuration (each site closed or at exactly one size) is
//! enumerated; with installs fixed the remaining problem is a pure flow LP,
//! solved by the dense simplex in [`simplex`]. The minimum over all
//! configurations is the global optimum of the MILP.

pub mod simplex;

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Echelon, Instance};
use crate::milp::{CanonicalMilp, Sense, VarKey};
use crate::model_io::{Solution, SolutionSource, SolveStatus};
use simplex::{LpOutcome, LpProblem, LpRow, SimplexOptions};

#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_configs: u64,
    pub max_lp_rows: usize,
    pub max_lp_columns: usize,
    pub simplex: SimplexOptions,
    /// Skip configurations whose open CF capacity cannot hold the quota.
    pub capacity_pruning: bool,
    pub parallel: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_configs: 1 << 20,
            max_lp_rows: 5_000,
            max_lp_columns: 20_000,
            simplex: SimplexOptions::default(),
            capacity_pruning: true,
            parallel: true,
        }
    }
}

/// Chosen size option per site, `None` meaning closed. Sites are ordered CF,
/// RTF, CPF, DPF, each in instance order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Configuration {
    pub choices: Vec<Option<usize>>,
}

impl Configuration {
    /// Number of open sites per echelon.
    pub fn open_counts(&self, inst: &Instance) -> [usize; 4] {
        let mut out = [0; 4];
        let mut k = 0;
        for e in Echelon::ALL {
            for _ in &inst.echelon(e).candidate_sites {
                if self.choices[k].is_some() {
                    out[e.index()] += 1;
                }
                k += 1;
            }
        }
        out
    }

    pub fn choice(&self, inst: &Instance, echelon: Echelon, site: usize) -> Option<usize> {
        let offset: usize = Echelon::ALL[..echelon.index()]
            .iter()
            .map(|&e| inst.echelon(e).candidate_sites.len())
            .sum();
        self.choices[offset + site]
    }

    pub fn describe(&self, inst: &Instance) -> String {
        let mut parts = Vec::new();
        for e in Echelon::ALL {
            let spec = inst.echelon(e);
            for (s, site) in spec.candidate_sites.iter().enumerate() {
                if let Some(c) = self.choice(inst, e, s) {
                    parts.push(format!("{e}:{}={}", site.id, spec.size_options[c].id));
                }
            }
        }
        if parts.is_empty() {
            "all closed".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Mixed-radix view of the configuration space; index order is
/// lexicographic order of [`Configuration`].
#[derive(Debug, Clone)]
pub struct ConfigSpace {
    radices: Vec<usize>,
    count: u64,
}

impl ConfigSpace {
    pub fn new(inst: &Instance) -> Self {
        let radices: Vec<usize> = Echelon::ALL
            .iter()
            .flat_map(|&e| {
                let spec = inst.echelon(e);
                std::iter::repeat_n(spec.size_options.len() + 1, spec.candidate_sites.len())
            })
            .collect();
        let count = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r as u64))
            .unwrap_or(u64::MAX);
        Self { radices, count }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn decode(&self, mut index: u64) -> Configuration {
        let mut choices = vec![None; self.radices.len()];
        for (k, &r) in self.radices.iter().enumerate().rev() {
            let digit = (index % r as u64) as usize;
            index /= r as u64;
            choices[k] = digit.checked_sub(1);
        }
        Configuration { choices }
    }
}

/// All configurations in lexicographic order; refuses when the space exceeds
/// `limits.max_configs`.
pub fn enumerate_configurations(
    inst: &Instance,
    limits: &OracleLimits,
) -> Result<impl Iterator<Item = Configuration>> {
    let space = ConfigSpace::new(inst);
    check_space(&space, limits)?;
    Ok((0..space.count()).map(move |k| space.decode(k)))
}

fn check_space(space: &ConfigSpace, limits: &OracleLimits) -> Result<()> {
    if space.count() > limits.max_configs {
        return Err(Error::OracleLimit(format!(
            "{} configurations exceed the limit of {}",
            if space.count() == u64::MAX {
                "more than 2^64".to_string()
            } else {
                space.count().to_string()
            },
            limits.max_configs
        )));
    }
    Ok(())
}

/// True when the open CF capacity of `config` is below the quota tonnage of
/// some period, which makes the quota and CF capacity rows jointly
/// unsatisfiable.
pub fn capacity_prunable(inst: &Instance, config: &Configuration) -> bool {
    let cf = inst.echelon(Echelon::Cf);
    let capacity: f64 = (0..cf.candidate_sites.len())
        .filter_map(|s| config.choice(inst, Echelon::Cf, s))
        .map(|c| cf.size_options[c].max_capacity_tons)
        .sum();
    (0..inst.periods.len()).any(|t| {
        let required: f64 = (0..inst.materials.len())
            .map(|p| inst.quota_tonnage(t, p))
            .sum();
        required > capacity + 1e-9 * capacity.max(1.0)
    })
}

/// Flow subproblem result with installs fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum FlowLpResult {
    /// `values` covers every model column; `objective` includes the
    /// configuration's installation cost.
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
}

/// The flow LP for a fixed configuration, after removing columns forced to
/// zero. `columns[k]` is the model column behind LP column `k`.
#[derive(Debug, Clone)]
pub struct FlowLp {
    pub lp: LpProblem,
    pub columns: Vec<usize>,
    /// Fixed values for every model column not in the LP.
    pub fixed: Vec<f64>,
    /// Detected without solving.
    pub trivially_infeasible: bool,
}

/// Builds the flow LP for `config`: binaries fixed, inflow at unopened
/// (site, size) pairs removed, then rows that force their remaining columns
/// to zero applied until nothing changes.
pub fn flow_lp(inst: &Instance, model: &CanonicalMilp, config: &Configuration) -> FlowLp {
    let n = model.columns.len();
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    for (col, c) in model.columns.iter().enumerate() {
        match c.key {
            VarKey::Install {
                echelon,
                site,
                size,
            } => {
                let open = config.choice(inst, echelon, site) == Some(size);
                fixed[col] = Some(if open { 1.0 } else { 0.0 });
            }
            VarKey::Flow(f) => {
                if let (Some(e), Some(size)) = (f.leg.destination(), f.size) {
                    if config.choice(inst, e, f.dest) != Some(size) {
                        fixed[col] = Some(0.0);
                    }
                }
            }
        }
    }

    let mut trivially_infeasible = false;
    let mut live = vec![true; model.rows.len()];
    loop {
        let mut changed = false;
        for (r, row) in model.rows.iter().enumerate() {
            if !live[r] {
                continue;
            }
            let mut rhs = row.rhs;
            let mut free = Vec::new();
            for &(c, a) in &row.coefs {
                match fixed[c] {
                    Some(v) => rhs -= a * v,
                    None => free.push(a),
                }
            }
            let scale = row.rhs.abs().max(1.0);
            if free.is_empty() {
                let bad = match row.sense {
                    Sense::Le => rhs < -1e-9 * scale,
                    Sense::Ge => rhs > 1e-9 * scale,
                    Sense::Eq => rhs.abs() > 1e-9 * scale,
                };
                trivially_infeasible |= bad;
                live[r] = false;
                continue;
            }
            let zero_rhs = rhs.abs() <= 1e-12 * scale;
            let all_pos = free.iter().all(|&a| a > 0.0);
            let all_neg = free.iter().all(|&a| a < 0.0);
            let forces_zero = zero_rhs
                && match row.sense {
                    Sense::Le => all_pos,
                    Sense::Ge => all_neg,
                    Sense::Eq => all_pos || all_neg,
                };
            if forces_zero {
                for &(c, _) in &row.coefs {
                    if fixed[c].is_none() {
                        fixed[c] = Some(0.0);
                    }
                }
                live[r] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let columns: Vec<usize> = (0..n).filter(|&c| fixed[c].is_none()).collect();
    let mut position = vec![usize::MAX; n];
    for (k, &c) in columns.iter().enumerate() {
        position[c] = k;
    }
    let fixed_values: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
    let rows = model
        .rows
        .iter()
        .zip(&live)
        .filter(|(_, &l)| l)
        .map(|(row, _)| {
            let mut rhs = row.rhs;
            let mut coefs = Vec::new();
            for &(c, a) in &row.coefs {
                match fixed[c] {
                    Some(v) => rhs -= a * v,
                    None => coefs.push((position[c], a)),
                }
            }
            LpRow {
                coefs,
                sense: row.sense,
                rhs,
            }
        })
        .collect();
    let costs = columns.iter().map(|&c| model.columns[c].cost).collect();
    FlowLp {
        lp: LpProblem { costs, rows },
        columns,
        fixed: fixed_values,
        trivially_infeasible,
    }
}

/// Solves the flow subproblem of one configuration.
pub fn solve_flow_lp(
    inst: &Instance,
    model: &CanonicalMilp,
    config: &Configuration,
    limits: &OracleLimits,
) -> Result<FlowLpResult> {
    let flp = flow_lp(inst, model, config);
    if flp.trivially_infeasible {
        return Ok(FlowLpResult::Infeasible);
    }
    if flp.lp.rows.len() > limits.max_lp_rows || flp.columns.len() > limits.max_lp_columns {
        return Err(Error::OracleLimit(format!(
            "flow LP of {} rows x {} columns exceeds limits {} x {}",
            flp.lp.rows.len(),
            flp.columns.len(),
            limits.max_lp_rows,
            limits.max_lp_columns
        )));
    }
    match simplex::solve(&flp.lp, &limits.simplex)? {
        LpOutcome::Optimal { x, .. } => {
            let mut values = flp.fixed;
            for (k, &c) in flp.columns.iter().enumerate() {
                values[c] = x[k];
            }
            let objective = model.objective(&values);
            Ok(FlowLpResult::Optimal { objective, values })
        }
        LpOutcome::Infeasible => Ok(FlowLpResult::Infeasible),
        LpOutcome::Unbounded => Err(Error::OracleLimit(
            "flow LP unbounded; costs must be nonnegative".into(),
        )),
    }
}

/// Counts and outcome of an exhaustive run.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub enumerated: u64,
    pub pruned: u64,
    pub infeasible: u64,
    pub solved: u64,
    pub best_objective: Option<f64>,
    pub best_configuration: Option<Configuration>,
    pub best_configuration_text: Option<String>,
    #[serde(serialize_with = "secs")]
    pub wall_time: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "configurations: {} enumerated, {} pruned, {} infeasible, {} solved",
            self.enumerated, self.pruned, self.infeasible, self.solved
        )?;
        match (&self.best_objective, &self.best_configuration_text) {
            (Some(o), Some(c)) => writeln!(f, "best objective {o} with {c}")?,
            _ => writeln!(f, "no feasible configuration")?,
        }
        write!(f, "wall time {:.3} s", self.wall_time.as_secs_f64())
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub solution: Solution,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Pruned,
    Infeasible,
    Solved(f64),
}

/// Global optimum by exhaustion. Among configurations whose objective is
/// within 1e-9 (relative) of the minimum, the lexicographically smallest wins.
/// Any LP failure aborts the whole run.
pub fn solve_exact(
    inst: &Instance,
    model: &CanonicalMilp,
    limits: &OracleLimits,
) -> Result<OracleResult> {
    let start = Instant::now();
    let space = ConfigSpace::new(inst);
    check_space(&space, limits)?;

    let evaluate = |k: u64| -> Result<Outcome> {
        let config = space.decode(k);
        if limits.capacity_pruning && capacity_prunable(inst, &config) {
            return Ok(Outcome::Pruned);
        }
        Ok(match solve_flow_lp(inst, model, &config, limits)? {
            FlowLpResult::Optimal { objective, .. } => Outcome::Solved(objective),
            FlowLpResult::Infeasible => Outcome::Infeasible,
        })
    };
    let outcomes: Vec<Outcome> = if limits.parallel {
        (0..space.count())
            .into_par_iter()
            .map(evaluate)
            .collect::<Result<_>>()?
    } else {
        (0..space.count()).map(evaluate).collect::<Result<_>>()?
    };

    let count = |pred: fn(&Outcome) -> bool| outcomes.iter().filter(|o| pred(o)).count() as u64;
    let best_value = outcomes
        .iter()
        .filter_map(|o| match o {
            Outcome::Solved(v) => Some(*v),
            _ => None,
        })
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let best_index = best_value.and_then(|best| {
        let tol = 1e-9 * best.abs().max(1.0);
        outcomes
            .iter()
            .position(|o| matches!(o, Outcome::Solved(v) if *v <= best + tol))
    });

    let (solution, best_configuration, best_objective) = match best_index {
        Some(k) => {
            let config = space.decode(k as u64);
            let FlowLpResult::Optimal { objective, values } =
                solve_flow_lp(inst, model, &config, limits)?
            else {
                unreachable!("re-solving a solved configuration");
            };
            let sol = Solution {
                values,
                objective_reported: Some(objective),
                bound: Some(objective),
                gap: Some(0.0),
                status: SolveStatus::Optimal,
                source: SolutionSource::Oracle,
            };
            (sol, Some(config), Some(objective))
        }
        None => {
            let mut sol = Solution::zero(model, SolutionSource::Oracle);
            sol.status = SolveStatus::Infeasible;
            (sol, None, None)
        }
    };

    let certificate = Certificate {
        enumerated: space.count(),
        pruned: count(|o| matches!(o, Outcome::Pruned)),
        infeasible: count(|o| matches!(o, Outcome::Infeasible)),
        solved: count(|o| matches!(o, Outcome::Solved(_))),
        best_objective,
        best_configuration_text: best_configuration.as_ref().map(|c| c.describe(inst)),
        best_configuration,
        wall_time: start.elapsed(),
    };
    Ok(OracleResult {
        solution,
        certificate,
    })
}
