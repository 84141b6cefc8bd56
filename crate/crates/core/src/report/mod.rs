//! Analyst-facing views of a solution: cost breakdown, flow tables and the
//! facility layout. Everything is derived from the instance, the model and
//! the solution values alone.

mod layout;

use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::{haversine_km, Leg};
use crate::instance::{Echelon, Instance};
use crate::milp::{CanonicalMilp, VarKey};
use crate::model_io::{Solution, SolutionSource};

pub use layout::{export_layout, LayoutExport, LayoutSite, SiteRole};

/// Binary columns above this value count as installed.
const OPEN_THRESHOLD: f64 = 0.5;

/// Costs recomputed from flows and instance parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub currency: String,
    /// Installation cost per echelon (CF, RTF, CPF, DPF).
    pub installation: [f64; 4],
    /// `operating[t][e]`: operating cost of echelon `e` in period `t`.
    pub operating: Vec<[f64; 4]>,
    /// `transport[t][l]`: round-trip transport cost on leg `l` in period `t`.
    pub transport: Vec<[f64; 5]>,
    pub total: f64,
}

impl CostBreakdown {
    pub fn installation_total(&self) -> f64 {
        self.installation.iter().sum()
    }

    pub fn operating_total(&self) -> f64 {
        self.operating.iter().flatten().sum()
    }

    pub fn transport_total(&self) -> f64 {
        self.transport.iter().flatten().sum()
    }

    /// Long-format CSV: `category,period,stage,cost`.
    pub fn to_csv(&self, inst: &Instance) -> String {
        let mut s = String::from("category,period,stage,cost\n");
        for e in Echelon::ALL {
            writeln!(s, "installation,all,{},{:.6}", e.tag(), self.installation[e.index()]).unwrap();
        }
        for (t, row) in self.operating.iter().enumerate() {
            for e in Echelon::ALL {
                writeln!(s, "operating,{},{},{:.6}", inst.periods[t].id, e.tag(), row[e.index()]).unwrap();
            }
        }
        for (t, row) in self.transport.iter().enumerate() {
            for leg in Leg::ALL {
                writeln!(s, "transport,{},{},{:.6}", inst.periods[t].id, leg.tag(), row[leg.index()]).unwrap();
            }
        }
        writeln!(s, "total,all,all,{:.6}", self.total).unwrap();
        s
    }
}

impl fmt::Display for CostBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "installation {:.6} {}", self.installation_total(), self.currency)?;
        writeln!(f, "operating    {:.6} {}", self.operating_total(), self.currency)?;
        writeln!(f, "transport    {:.6} {}", self.transport_total(), self.currency)?;
        write!(f, "total        {:.6} {}", self.total, self.currency)
    }
}

fn reconcile_tolerance(source: SolutionSource) -> f64 {
    match source {
        SolutionSource::Oracle => 1e-9,
        SolutionSource::External => 1e-6,
    }
}

/// Recomputes every cost component from the flow and install values, using
/// fresh great-circle distances rather than the model's objective
/// coefficients, and checks the sum against the solution's objective.
pub fn breakdown_costs(sol: &Solution, model: &CanonicalMilp, inst: &Instance) -> Result<CostBreakdown> {
    let install_factor = model.meta.options.install_cost_mode.factor(inst);
    let periods = inst.periods.len();
    let mut out = CostBreakdown {
        currency: inst.units.currency.clone(),
        installation: [0.0; 4],
        operating: vec![[0.0; 4]; periods],
        transport: vec![[0.0; 5]; periods],
        total: 0.0,
    };
    for (c, &v) in sol.values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        match *model.index.key(c) {
            VarKey::Install { echelon, size, .. } => {
                out.installation[echelon.index()] +=
                    v * inst.echelon(echelon).size_options[size].install_cost_annual * install_factor;
            }
            VarKey::Flow(f) => {
                let dt = inst.periods[f.period].duration_years;
                if let Some(e) = f.leg.destination() {
                    out.operating[f.period][e.index()] += v * dt * inst.echelon(e).op_cost_per_ton;
                }
                let a = f.leg.origins(inst)[f.origin];
                let b = f.leg.destinations(inst)[f.dest];
                let d = haversine_km((a.lat, a.lon), (b.lat, b.lon), inst.circuity_factor)?;
                let tp = inst
                    .transport_cost
                    .get(&f.material)
                    .ok_or_else(|| Error::MissingTransportCost(inst.materials[f.material].id.clone()))?;
                out.transport[f.period][f.leg.index()] += v * 2.0 * dt * d * tp;
            }
        }
    }
    out.total = out.installation_total() + out.operating_total() + out.transport_total();
    let objective = sol.objective_or_recomputed(model);
    let tol = reconcile_tolerance(sol.source);
    if (out.total - objective).abs() > tol * objective.abs().max(1.0) {
        return Err(Error::Reconciliation {
            breakdown: out.total,
            objective,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowRow {
    pub period: String,
    pub leg: &'static str,
    pub origin: String,
    pub destination: String,
    pub material: String,
    pub tons: f64,
}

/// Chosen size and load of one open facility in one period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacilityAnnotation {
    pub echelon: &'static str,
    pub site: String,
    pub size: String,
    pub period: String,
    /// θ: maximum inflow within the period.
    pub capacity_tons: f64,
    /// θ scaled to a full year (θ / ΔT), for display.
    pub annual_capacity_tons: f64,
    pub inflow_tons: f64,
    /// inflow / θ; 0 for zero-capacity sizes.
    pub utilization: f64,
}

/// Per-leg flows with zero flows omitted, sorted by (period, leg, origin,
/// destination, material) in instance order, plus open-facility annotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTable {
    pub rows: Vec<FlowRow>,
    pub facilities: Vec<FacilityAnnotation>,
}

impl FlowTable {
    pub fn rows_for<'a>(&'a self, period: &'a str, leg: Leg) -> impl Iterator<Item = &'a FlowRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.period == period && r.leg == leg.tag())
    }

    pub fn write_flows_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["period", "leg", "origin", "destination", "material", "tons"])?;
        for r in &self.rows {
            w.write_record([
                r.period.as_str(),
                r.leg,
                &r.origin,
                &r.destination,
                &r.material,
                &format!("{:.6}", r.tons),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_facilities_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "echelon",
            "site",
            "size",
            "period",
            "capacity_tons",
            "annual_capacity_tons",
            "inflow_tons",
            "utilization",
        ])?;
        for f in &self.facilities {
            w.write_record([
                f.echelon,
                &f.site,
                &f.size,
                &f.period,
                &format!("{:.6}", f.capacity_tons),
                &format!("{:.6}", f.annual_capacity_tons),
                &format!("{:.6}", f.inflow_tons),
                &format!("{:.6}", f.utilization),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Chosen size option per facility site, `None` when closed.
pub(crate) fn open_sizes(sol: &Solution, model: &CanonicalMilp, inst: &Instance) -> [Vec<Option<usize>>; 4] {
    let mut open: [Vec<Option<usize>>; 4] =
        Echelon::ALL.map(|e| vec![None; inst.echelon(e).candidate_sites.len()]);
    for c in model.index.install_columns() {
        if let VarKey::Install { echelon, site, size } = *model.index.key(c) {
            if sol.values[c] > OPEN_THRESHOLD {
                open[echelon.index()][site] = Some(size);
            }
        }
    }
    open
}

pub fn export_flows(sol: &Solution, model: &CanonicalMilp, inst: &Instance) -> FlowTable {
    // (period, leg, origin, destination, material) → tons, summed over sizes
    let mut totals = std::collections::BTreeMap::<(usize, usize, usize, usize, usize), f64>::new();
    let mut inflow: [Vec<Vec<f64>>; 4] = Echelon::ALL
        .map(|e| vec![vec![0.0; inst.periods.len()]; inst.echelon(e).candidate_sites.len()]);
    for c in 0..model.index.flow_count() {
        let v = sol.values[c];
        if v == 0.0 {
            continue;
        }
        let f = model.index.key(c).as_flow().expect("flow columns come first");
        *totals
            .entry((f.period, f.leg.index(), f.origin, f.dest, f.material))
            .or_default() += v;
        if let Some(e) = f.leg.destination() {
            inflow[e.index()][f.dest][f.period] += v;
        }
    }
    let rows = totals
        .into_iter()
        .filter(|(_, tons)| *tons != 0.0)
        .map(|((t, l, o, d, p), tons)| {
            let leg = Leg::ALL[l];
            FlowRow {
                period: inst.periods[t].id.clone(),
                leg: leg.tag(),
                origin: leg.origins(inst)[o].id.clone(),
                destination: leg.destinations(inst)[d].id.clone(),
                material: inst.materials[p].id.clone(),
                tons,
            }
        })
        .collect();

    let open = open_sizes(sol, model, inst);
    let mut facilities = Vec::new();
    for e in Echelon::ALL {
        let spec = inst.echelon(e);
        for (s, choice) in open[e.index()].iter().enumerate() {
            let Some(size) = *choice else { continue };
            let option = &spec.size_options[size];
            for (t, period) in inst.periods.iter().enumerate() {
                let load = inflow[e.index()][s][t];
                let cap = option.max_capacity_tons;
                facilities.push(FacilityAnnotation {
                    echelon: e.tag(),
                    site: spec.candidate_sites[s].id.clone(),
                    size: option.id.clone(),
                    period: period.id.clone(),
                    capacity_tons: cap,
                    annual_capacity_tons: cap / period.duration_years,
                    inflow_tons: load,
                    utilization: if cap > 0.0 { load / cap } else { 0.0 },
                });
            }
        }
    }
    FlowTable { rows, facilities }
}

/// Everything `report` writes, computed once.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub costs: CostBreakdown,
    pub flows: FlowTable,
    pub layout: LayoutExport,
}

impl ReportBundle {
    pub fn build(sol: &Solution, model: &CanonicalMilp, inst: &Instance) -> Result<Self> {
        Ok(Self {
            costs: breakdown_costs(sol, model, inst)?,
            flows: export_flows(sol, model, inst),
            layout: export_layout(sol, model, inst),
        })
    }

    /// Writes `costs.csv`, `flows.csv`, `facilities.csv`, `layout.csv` and
    /// `layout.geojson` into `dir`, creating it if needed. Returns the paths.
    pub fn write_to(&self, dir: &Path, inst: &Instance) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let path = |name: &str| dir.join(name);
        std::fs::write(path("costs.csv"), self.costs.to_csv(inst))?;
        self.flows
            .write_flows_csv(std::fs::File::create(path("flows.csv"))?)?;
        self.flows
            .write_facilities_csv(std::fs::File::create(path("facilities.csv"))?)?;
        self.layout
            .write_csv(std::fs::File::create(path("layout.csv"))?)?;
        std::fs::write(path("layout.geojson"), self.layout.to_geojson())?;
        Ok(["costs.csv", "flows.csv", "facilities.csv", "layout.csv", "layout.geojson"]
            .into_iter()
            .map(path)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{build_milp, BuildOptions};
    use crate::oracle::{solve_exact, OracleLimits};
    use crate::scenario::hand_chain_instance;

    fn solved_hand() -> (Instance, CanonicalMilp, Solution) {
        let inst = hand_chain_instance();
        let model = build_milp(&inst, BuildOptions::default()).unwrap();
        let sol = solve_exact(&inst, &model, &OracleLimits::default()).unwrap().solution;
        (inst, model, sol)
    }

    #[test]
    fn hand_chain_breakdown() {
        let (inst, model, sol) = solved_hand();
        let b = breakdown_costs(&sol, &model, &inst).unwrap();
        assert!((b.installation_total() - 400.0).abs() <= 1e-9 * 400.0);
        assert!((b.operating_total() - 40.0).abs() <= 1e-9 * 40.0);
        assert!((b.transport_total() - 100.0).abs() <= 1e-9 * 100.0);
        assert!((b.total - 540.0).abs() <= 1e-9 * 540.0);
        for leg in Leg::ALL {
            assert!((b.transport[0][leg.index()] - 20.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_solution_gives_zero_breakdown() {
        let (inst, model, _) = solved_hand();
        let zero = Solution::zero(&model, SolutionSource::Oracle);
        let b = breakdown_costs(&zero, &model, &inst).unwrap();
        assert_eq!(b.total, 0.0);
        assert!(b.operating.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn drift_is_a_hard_error() {
        let (inst, model, mut sol) = solved_hand();
        sol.objective_reported = Some(541.0);
        assert!(matches!(
            breakdown_costs(&sol, &model, &inst),
            Err(Error::Reconciliation { .. })
        ));
    }

    #[test]
    fn hand_chain_flows() {
        let (inst, model, sol) = solved_hand();
        let table = export_flows(&sol, &model, &inst);
        assert_eq!(table.rows.len(), 5);
        assert!(table.rows.iter().all(|r| (r.tons - 10.0).abs() < 1e-9));
        let legs: Vec<_> = table.rows.iter().map(|r| r.leg).collect();
        assert_eq!(legs, ["src-cf", "cf-rtf", "rtf-cpf", "cpf-dpf", "dpf-sink"]);
        assert_eq!(table.facilities.len(), 4);
        assert!(table.facilities.iter().all(|f| (f.utilization - 0.5).abs() < 1e-9));
    }

    #[test]
    fn flows_csv_round_trips_at_six_decimals() {
        let (inst, model, sol) = solved_hand();
        let table = export_flows(&sol, &model, &inst);
        let mut buf = Vec::new();
        table.write_flows_csv(&mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let back: Vec<f64> = reader
            .records()
            .map(|r| r.unwrap()[5].parse().unwrap())
            .collect();
        for (r, v) in table.rows.iter().zip(&back) {
            assert!((r.tons - v).abs() <= 5e-7);
        }
        assert_eq!(back.len(), table.rows.len());
    }
}
