//! Independent re-check of a solution against every model row.

use std::fmt;

use super::{Solution, SolutionSource};
use crate::milp::{CanonicalMilp, Family, VarKind};

/// Maximum distance of a binary column from {0, 1}.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCheck {
    pub family: Family,
    pub rows: usize,
    pub violations: usize,
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub tol: f64,
    pub families: Vec<FamilyCheck>,
    /// Continuous columns below −tol.
    pub bound_violations: usize,
    pub integrality_violations: usize,
    pub worst_integrality: f64,
    /// Largest row or bound violation.
    pub worst_violation: f64,
    pub objective_recomputed: f64,
    pub objective_reported: Option<f64>,
    /// Reported and recomputed objective agree (1e-9 relative for oracle
    /// solutions, 1e-6 for external ones); true when nothing was reported.
    pub objective_consistent: bool,
    pub pass: bool,
}

impl VerificationReport {
    pub fn family(&self, family: Family) -> &FamilyCheck {
        self.families
            .iter()
            .find(|f| f.family == family)
            .expect("every family is checked")
    }

    pub fn violated_families(&self) -> Vec<Family> {
        self.families
            .iter()
            .filter(|f| f.violations > 0)
            .map(|f| f.family)
            .collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification at tol {:e}", self.tol)?;
        for fc in &self.families {
            writeln!(
                f,
                "  {:<12} rows {:>8}  violations {:>6}  worst {:.3e}",
                fc.family.to_string(),
                fc.rows,
                fc.violations,
                fc.worst
            )?;
        }
        writeln!(f, "  bounds       violations {}", self.bound_violations)?;
        writeln!(
            f,
            "  integrality  violations {}  worst {:.3e}",
            self.integrality_violations, self.worst_integrality
        )?;
        match self.objective_reported {
            Some(r) => writeln!(
                f,
                "  objective    reported {r}  recomputed {}  {}",
                self.objective_recomputed,
                if self.objective_consistent { "consistent" } else { "MISMATCH" }
            )?,
            None => writeln!(f, "  objective    recomputed {}", self.objective_recomputed)?,
        }
        let violated = self.violated_families();
        if !violated.is_empty() {
            let names: Vec<String> = violated.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  violated     {}", names.join(", "))?;
        }
        writeln!(f, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Checks every row within `tol` (absolute, on row activity), nonnegativity
/// of continuous columns, integrality of binaries within [`INTEGRALITY_TOL`],
/// and the reported objective.
pub fn verify_solution(sol: &Solution, model: &CanonicalMilp, tol: f64) -> VerificationReport {
    let mut families: Vec<FamilyCheck> = Family::ALL
        .iter()
        .map(|&family| FamilyCheck {
            family,
            rows: 0,
            violations: 0,
            worst: 0.0,
        })
        .collect();
    let mut worst_violation: f64 = 0.0;
    for row in &model.rows {
        let fc = &mut families[row.key.family() as usize];
        let v = row.violation(&sol.values);
        fc.rows += 1;
        fc.worst = fc.worst.max(v);
        worst_violation = worst_violation.max(v);
        if v > tol {
            fc.violations += 1;
        }
    }

    let mut bound_violations = 0;
    let mut integrality_violations = 0;
    let mut worst_integrality: f64 = 0.0;
    for (col, &v) in model.columns.iter().zip(&sol.values) {
        match col.kind {
            VarKind::Continuous => {
                worst_violation = worst_violation.max(-v);
                if v < -tol || !v.is_finite() {
                    bound_violations += 1;
                }
            }
            VarKind::Binary => {
                let dist = if v.is_finite() {
                    v.abs().min((v - 1.0).abs())
                } else {
                    f64::INFINITY
                };
                worst_integrality = worst_integrality.max(dist);
                if dist > INTEGRALITY_TOL {
                    integrality_violations += 1;
                }
            }
        }
    }

    let objective_recomputed = sol.objective(model);
    let rel = match sol.source {
        SolutionSource::Oracle => 1e-9,
        SolutionSource::External => 1e-6,
    };
    let objective_consistent = sol.objective_reported.is_none_or(|r| {
        (r - objective_recomputed).abs() <= rel * r.abs().max(1.0)
    });
    let pass = families.iter().all(|f| f.violations == 0)
        && bound_violations == 0
        && integrality_violations == 0
        && objective_consistent;
    VerificationReport {
        tol,
        families,
        bound_violations,
        integrality_violations,
        worst_integrality,
        worst_violation,
        objective_recomputed,
        objective_reported: sol.objective_reported,
        objective_consistent,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{build_milp, BuildOptions};
    use crate::model_io::parse_solution;
    use crate::scenario::hand_chain_instance;

    fn model_with_two_cf_sizes() -> CanonicalMilp {
        let mut inst = hand_chain_instance();
        let mut big = inst.echelons[0].size_options[0].clone();
        big.id = "big".into();
        inst.echelons[0].size_options.push(big);
        build_milp(&inst, BuildOptions::default()).unwrap()
    }

    #[test]
    fn two_sizes_at_one_site_is_one_onesize_violation() {
        let m = model_with_two_cf_sizes();
        let sol = parse_solution("bcf_cf1_std 1\nbcf_cf1_big 1\n", &m).unwrap();
        let rep = verify_solution(&sol, &m, 1e-6);
        assert!(!rep.pass);
        assert_eq!(rep.family(Family::OneSize).violations, 1);
        let others: usize = rep
            .families
            .iter()
            .filter(|f| f.family != Family::OneSize && f.family != Family::Quota)
            .map(|f| f.violations)
            .sum();
        assert_eq!(others, 0);
    }

    #[test]
    fn zero_solution_with_quota_violates_only_quota() {
        let m = build_milp(&hand_chain_instance(), BuildOptions::default()).unwrap();
        let sol = parse_solution("", &m).unwrap();
        let rep = verify_solution(&sol, &m, 1e-6);
        assert!(!rep.pass);
        assert_eq!(rep.violated_families(), vec![Family::Quota]);
    }

    #[test]
    fn fractional_binary_fails_integrality() {
        let m = build_milp(&hand_chain_instance(), BuildOptions::default()).unwrap();
        let sol = parse_solution("bcf_cf1_std 0.4\n", &m).unwrap();
        let rep = verify_solution(&sol, &m, 1e-6);
        assert_eq!(rep.integrality_violations, 1);
        assert!((rep.worst_integrality - 0.4).abs() < 1e-12);
    }

    #[test]
    fn objective_mismatch_fails() {
        let m = build_milp(&hand_chain_instance(), BuildOptions::default()).unwrap();
        let sol = parse_solution("=obj= 5\n", &m).unwrap();
        let rep = verify_solution(&sol, &m, 1e-6);
        assert!(!rep.objective_consistent);
    }
}
