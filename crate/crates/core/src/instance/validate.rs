//! Pre-solve screening by aggregate reasoning.
//!
//! Errors are necessary-condition failures: an instance with an error finding
//! has no feasible solution in the pruned model. Warnings flag data that is
//! legal but probably unintended.

use std::fmt;

use super::{Echelon, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl Finding {
    fn error(code: &'static str, message: String) -> Self {
        Self {
            severity: Severity::Error,
            code,
            message,
        }
    }

    fn warning(code: &'static str, message: String) -> Self {
        Self {
            severity: Severity::Warning,
            code,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "WARNING",
            Severity::Error => "ERROR",
        };
        write!(f, "{sev} [{}] {}", self.code, self.message)
    }
}

fn exceeds(required: f64, available: f64) -> bool {
    required > available + 1e-9 * available.abs().max(1.0)
}

/// Screens an instance. An empty list means clean.
pub fn validate_instance(inst: &Instance) -> Vec<Finding> {
    let mut out = Vec::new();
    let mat = |p: usize| inst.materials[p].id.as_str();

    for e in Echelon::ALL {
        let spec = inst.echelon(e);
        if spec.candidate_sites.is_empty() {
            out.push(Finding::error(
                "empty-echelon",
                format!("{e} has no candidate sites"),
            ));
        }
        if spec.size_options.is_empty() {
            out.push(Finding::error(
                "empty-echelon",
                format!("{e} has no size options"),
            ));
        }
        for s in spec.size_options.iter().filter(|s| s.max_capacity_tons == 0.0) {
            out.push(Finding::warning(
                "zero-capacity",
                format!("{e} size option '{}' has zero capacity", s.id),
            ));
        }
    }
    if inst.sources.is_empty() {
        out.push(Finding::error("empty-echelon", "no sources".into()));
    }
    if inst.sinks.is_empty() {
        out.push(Finding::error("empty-echelon", "no sinks".into()));
    }
    if inst.periods.is_empty() {
        out.push(Finding::error("empty-echelon", "no periods".into()));
    }

    for p in 0..inst.materials.len() {
        let used = inst
            .echelons
            .iter()
            .any(|spec| spec.accepts(p) || spec.produces(p));
        if !used {
            out.push(Finding::warning(
                "unused-material",
                format!("material '{}' is neither an input nor an output of any echelon", mat(p)),
            ));
        }
        if !inst.transport_cost.contains_key(&p) {
            if used {
                out.push(Finding::error(
                    "missing-transport-cost",
                    format!("material '{}' has no transport cost", mat(p)),
                ));
            } else {
                out.push(Finding::warning(
                    "missing-transport-cost",
                    format!(
                        "material '{}' has no transport cost; unpruned builds will fail",
                        mat(p)
                    ),
                ));
            }
        }
    }

    let cf = inst.echelon(Echelon::Cf);
    let dpf = inst.echelon(Echelon::Dpf);
    for p in 0..inst.materials.len() {
        let supplied = inst.sources.iter().any(|s| {
            s.supply
                .iter()
                .any(|(&(_, q), &tons)| q == p && tons > 0.0)
        });
        if supplied && !cf.accepts(p) {
            out.push(Finding::warning(
                "uncollectable-supply",
                format!("material '{}' is supplied but not accepted by CF", mat(p)),
            ));
        }
        let demanded = inst.sinks.iter().any(|s| {
            s.demand
                .iter()
                .any(|(&(_, q), &tons)| q == p && tons > 0.0)
        });
        if demanded && !dpf.produces(p) {
            out.push(Finding::warning(
                "unmet-demand-material",
                format!("material '{}' is demanded but not produced by DPF", mat(p)),
            ));
        }
    }
    for e in [Echelon::Cf, Echelon::Rtf, Echelon::Cpf] {
        let next = e.next().expect("non-terminal echelon");
        for &o in &inst.echelon(e).output_materials {
            if !inst.echelon(next).accepts(o) && inst.echelon(e).yield_of(o) > 0.0 {
                out.push(Finding::warning(
                    "dead-end-output",
                    format!("{e} output '{}' is not accepted by {next}", mat(o)),
                ));
            }
        }
    }

    for t in 0..inst.periods.len() {
        let pid = &inst.periods[t].id;
        let mut total_quota = 0.0;
        for p in 0..inst.materials.len() {
            let q = inst.quota_tonnage(t, p);
            total_quota += q;
            if q > 0.0 && !cf.accepts(p) {
                out.push(Finding::error(
                    "quota-not-collectable",
                    format!(
                        "period '{pid}': quota of {q} t on material '{}', which CF does not accept",
                        mat(p)
                    ),
                ));
            }
        }
        let cf_capacity: f64 = cf.candidate_sites.len() as f64 * cf.max_site_capacity();
        if exceeds(total_quota, cf_capacity) {
            out.push(Finding::error(
                "aggregate-capacity-short",
                format!(
                    "period '{pid}': aggregate CF capacity short: quota requires {total_quota} t, all CF sites at largest size hold {cf_capacity} t"
                ),
            ));
        }

        // Propagate the minimum quota-driven mass along the chain.
        let mut inflow: f64 = cf
            .input_materials
            .iter()
            .map(|&p| inst.quota_tonnage(t, p))
            .sum();
        for e in Echelon::ALL {
            let spec = inst.echelon(e);
            if e != Echelon::Cf {
                let cap = spec.candidate_sites.len() as f64 * spec.max_site_capacity();
                if exceeds(inflow, cap) {
                    out.push(Finding::error(
                        "aggregate-capacity-short",
                        format!(
                            "period '{pid}': aggregate {e} capacity short: yield-chained quota requires {inflow} t, available {cap} t"
                        ),
                    ));
                }
            }
            let produced: Vec<(usize, f64)> = spec
                .output_materials
                .iter()
                .map(|&o| (o, spec.yield_of(o) * inflow))
                .collect();
            match e.next() {
                Some(next) => {
                    let next_spec = inst.echelon(next);
                    let mut next_inflow = 0.0;
                    for (o, mass) in produced {
                        if next_spec.accepts(o) {
                            next_inflow += mass;
                        } else if mass > 0.0 {
                            out.push(Finding::error(
                                "dead-end-output",
                                format!(
                                    "period '{pid}': quota forces {mass} t of {e} output '{}', which {next} does not accept",
                                    mat(o)
                                ),
                            ));
                        }
                    }
                    inflow = next_inflow;
                }
                None => {
                    for (o, mass) in produced {
                        let demand: f64 = (0..inst.sinks.len()).map(|n| inst.demand(t, o, n)).sum();
                        if exceeds(mass, demand) {
                            out.push(Finding::error(
                                "terminal-demand-short",
                                format!(
                                    "period '{pid}': yield-chained quota delivers {mass} t of '{}' but sinks demand only {demand} t",
                                    mat(o)
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::hand_chain_instance;

    #[test]
    fn hand_chain_is_clean() {
        let inst = hand_chain_instance();
        assert_eq!(validate_instance(&inst), vec![]);
    }

    #[test]
    fn cf_capacity_shortfall_is_an_error() {
        let mut inst = hand_chain_instance();
        // quota needs 10 t, a single CF site offers 9 t
        inst.echelons[0].size_options[0].max_capacity_tons = 9.0;
        let findings = validate_instance(&inst);
        let errors: Vec<_> = findings.iter().filter(|f| f.is_error()).collect();
        assert_eq!(errors.len(), 1, "{findings:?}");
        assert!(errors[0].message.contains("aggregate CF capacity short"));

        inst.echelons[0].size_options[0].max_capacity_tons = 10.0;
        assert!(validate_instance(&inst).iter().all(|f| !f.is_error()));
    }

    #[test]
    fn yield_chain_exceeding_terminal_demand_is_an_error() {
        let mut inst = hand_chain_instance();
        // 10 t collected, yields 0.8 * 0.5 * 0.9 * 1.0 => 3.6 t delivered
        inst.echelons[0].yields.insert(0, 0.8);
        inst.echelons[1].yields.insert(0, 0.5);
        inst.echelons[2].yields.insert(0, 0.9);
        inst.sinks[0].demand.insert((0, 0), 3.5);
        let findings = validate_instance(&inst);
        assert!(
            findings
                .iter()
                .any(|f| f.is_error() && f.code == "terminal-demand-short"),
            "{findings:?}"
        );
        inst.sinks[0].demand.insert((0, 0), 3.6);
        assert!(validate_instance(&inst).iter().all(|f| !f.is_error()));
    }

    #[test]
    fn unused_material_is_a_warning() {
        let mut inst = hand_chain_instance();
        inst.materials.push(crate::instance::Material { id: "glass".into() });
        inst.transport_cost.insert(1, 0.2);
        let findings = validate_instance(&inst);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].severity, Severity::Warning);
        assert_eq!(findings[0].code, "unused-material");
    }

    #[test]
    fn validation_is_pure() {
        let mut inst = hand_chain_instance();
        inst.echelons[0].size_options[0].max_capacity_tons = 1.0;
        let before = inst.clone();
        let a = validate_instance(&inst);
        let b = validate_instance(&inst);
        assert_eq!(a, b);
        assert_eq!(inst, before);
    }
}
