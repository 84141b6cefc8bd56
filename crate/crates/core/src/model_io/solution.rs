//! Neutral solution file: one `name value` pair per line.
//!
//! ```text
//! =obj= 540
//! =status= optimal
//! # comments start with '#'
//! xsc_t1_waste_s1_cf1_std 10
//! bcf_cf1_std 1
//! ```
//!
//! Directive lines are `=obj=`, `=bound=`, `=gap=`, `=status=` and
//! `=source=`; all are optional. Columns not listed are zero.

use std::collections::HashSet;
use std::fmt::{self, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::milp::CanonicalMilp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
    Unknown,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Unknown => "unknown",
        })
    }
}

impl FromStr for SolveStatus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "optimal" => SolveStatus::Optimal,
            "feasible" => SolveStatus::Feasible,
            "infeasible" => SolveStatus::Infeasible,
            "unbounded" => SolveStatus::Unbounded,
            "unknown" => SolveStatus::Unknown,
            other => return Err(format!("unknown status '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionSource {
    Oracle,
    External,
}

impl fmt::Display for SolutionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionSource::Oracle => "oracle",
            SolutionSource::External => "external",
        })
    }
}

/// Column values for one model plus what the producer reported about them.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// One value per model column.
    pub values: Vec<f64>,
    pub objective_reported: Option<f64>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub status: SolveStatus,
    pub source: SolutionSource,
}

impl Solution {
    pub fn zero(model: &CanonicalMilp, source: SolutionSource) -> Self {
        Self {
            values: vec![0.0; model.columns.len()],
            objective_reported: None,
            bound: None,
            gap: None,
            status: SolveStatus::Unknown,
            source,
        }
    }

    pub fn value(&self, model: &CanonicalMilp, name: &str) -> Option<f64> {
        model.column_by_name(name).map(|c| self.values[c])
    }

    /// Objective recomputed from the column values.
    pub fn objective(&self, model: &CanonicalMilp) -> f64 {
        model.objective(&self.values)
    }

    /// Reported objective, or the recomputed one when none was reported.
    pub fn objective_or_recomputed(&self, model: &CanonicalMilp) -> f64 {
        self.objective_reported
            .unwrap_or_else(|| self.objective(model))
    }
}

/// Relative gap (objective − bound) / |objective|.
pub fn relative_gap(objective: f64, bound: f64) -> f64 {
    if objective == bound {
        0.0
    } else if objective == 0.0 {
        f64::INFINITY
    } else {
        (objective - bound) / objective.abs()
    }
}

/// Writes a solution in the neutral format. Only nonzero values are listed.
pub fn format_solution(sol: &Solution, model: &CanonicalMilp) -> String {
    let mut s = String::new();
    if let Some(obj) = sol.objective_reported {
        writeln!(s, "=obj= {obj}").unwrap();
    }
    writeln!(s, "=status= {}", sol.status).unwrap();
    writeln!(s, "=source= {}", sol.source).unwrap();
    if let Some(b) = sol.bound {
        writeln!(s, "=bound= {b}").unwrap();
    }
    if let Some(g) = sol.gap {
        writeln!(s, "=gap= {g}").unwrap();
    }
    for (c, &v) in sol.values.iter().enumerate() {
        if v != 0.0 {
            writeln!(s, "{} {v}", model.col_names[c]).unwrap();
        }
    }
    s
}

/// Parses a solution file against a model. Unknown column names, malformed
/// numbers and repeated assignments are errors.
///
/// Without a `=source=` directive the solution is attributed to an external
/// solver. Without `=gap=`, the gap is derived from `=obj=` and `=bound=`
/// when both are present.
pub fn parse_solution(text: &str, model: &CanonicalMilp) -> Result<Solution> {
    let mut sol = Solution::zero(model, SolutionSource::External);
    let mut assigned = HashSet::new();
    let mut gap = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let bad = |message: String| Error::SolutionFormat {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(format!("expected 'name value', got '{line}'")));
        };
        let number = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| !x.is_nan())
                .ok_or_else(|| bad(format!("unparsable number '{v}'")))
        };
        match name {
            "=obj=" => sol.objective_reported = Some(number(value)?),
            "=bound=" => sol.bound = Some(number(value)?),
            "=gap=" => gap = Some(number(value)?),
            "=status=" => sol.status = value.parse().map_err(bad)?,
            "=source=" => {
                sol.source = match value {
                    "oracle" => SolutionSource::Oracle,
                    "external" => SolutionSource::External,
                    other => return Err(bad(format!("unknown source '{other}'"))),
                }
            }
            _ => {
                let c = model
                    .column_by_name(name)
                    .ok_or_else(|| bad(format!("unknown column '{name}'")))?;
                if !assigned.insert(c) {
                    return Err(bad(format!("column '{name}' assigned twice")));
                }
                sol.values[c] = number(value)?;
            }
        }
    }
    sol.gap = gap.or_else(|| {
        sol.objective_reported
            .zip(sol.bound)
            .map(|(o, b)| relative_gap(o, b))
    });
    Ok(sol)
}
