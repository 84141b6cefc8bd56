//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use upcycle_net::instance::{parse_instance, Echelon, Instance};
use upcycle_net::milp::{build_milp, BuildOptions, CanonicalMilp, Family, VarKey};
use upcycle_net::model_io::{run_external_solver, verify_solution, ExternalConfig, Solution, SolveStatus};
use upcycle_net::oracle::{solve_exact, solve_flow_lp, FlowLpResult, OracleLimits, OracleResult};
use upcycle_net::report::breakdown_costs;
use upcycle_net::scenario::{economies_of_scale_instance, generate, hand_chain_instance, make_tiny_suite, GenSpec};

use common::{external_solver_cmd, permuted, random_instance, random_shape, scaled};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

fn build(inst: &Instance, prune: bool) -> Result<CanonicalMilp, String> {
    build_milp(
        inst,
        BuildOptions {
            prune,
            ..BuildOptions::default()
        },
    )
    .map_err(|e| format!("{}: build failed: {e}", inst.name))
}

fn oracle(inst: &Instance, model: &CanonicalMilp) -> Result<OracleResult, String> {
    solve_exact(inst, model, &OracleLimits::default()).map_err(|e| format!("{}: oracle failed: {e}", inst.name))
}

/// Optimal solutions gathered by criterion 1 for the conservation checks.
struct Optimum {
    inst: Instance,
    model: CanonicalMilp,
    solution: Solution,
    origin: &'static str,
}

fn criterion_1(solver: Option<&str>, optima: &mut Vec<Optimum>) -> Outcome {
    let start = Instant::now();
    let suite = make_tiny_suite(2024);
    let mut compared = 0;
    let mut failures = Vec::new();
    for inst in &suite {
        if let Err(e) = check_instance(inst, solver, optima, &mut compared) {
            failures.push(e);
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("suite took {:.1} s, budget 300 s", elapsed.as_secs_f64()));
    }
    let external = match solver {
        Some(_) => format!("{compared} external optima matched"),
        None => "no external solver configured".to_string(),
    };
    let summary = format!(
        "{} instances; prune on/off, permutation and scaling consistent; {external}; {:.1} s",
        suite.len(),
        elapsed.as_secs_f64()
    );
    if failures.is_empty() {
        Outcome::Pass(summary)
    } else {
        Outcome::Fail(format!("{} failure(s): {}", failures.len(), failures.join("; ")))
    }
}

fn check_instance(
    inst: &Instance,
    solver: Option<&str>,
    optima: &mut Vec<Optimum>,
    compared: &mut usize,
) -> Result<(), String> {
    let name = &inst.name;
    let model = build(inst, true)?;
    let base = oracle(inst, &model)?;
    let objective = base.certificate.best_objective;

    let off_model = build(inst, false)?;
    let off = oracle(inst, &off_model)?.certificate.best_objective;
    ensure(
        match (objective, off) {
            (Some(a), Some(b)) => close(a, b, 1e-9),
            (None, None) => true,
            _ => false,
        },
        || format!("{name}: prune on {objective:?} vs off {off:?}"),
    )?;

    let perm = permuted(inst);
    let perm_obj = oracle(&perm, &build(&perm, true)?)?.certificate.best_objective;
    ensure(
        match (objective, perm_obj) {
            (Some(a), Some(b)) => close(a, b, 1e-9),
            (None, None) => true,
            _ => false,
        },
        || format!("{name}: permuted objective {perm_obj:?} vs {objective:?}"),
    )?;

    let k = 3.5;
    let big = scaled(inst, k);
    let big_result = oracle(&big, &build(&big, true)?)?;
    match (objective, &big_result.certificate.best_configuration) {
        (Some(o), Some(config)) => {
            let scaled_obj = big_result.certificate.best_objective.unwrap_or(f64::NAN);
            ensure(close(scaled_obj, k * o, 1e-9), || {
                format!("{name}: scaled objective {scaled_obj} vs {k}×{o}")
            })?;
            // the scaled argmin must also be optimal for the original costs
            let back = solve_flow_lp(inst, &model, config, &OracleLimits::default())
                .map_err(|e| format!("{name}: {e}"))?;
            let FlowLpResult::Optimal { objective: again, .. } = back else {
                return Err(format!("{name}: scaled argmin infeasible for the original"));
            };
            ensure(close(again, o, 1e-9), || {
                format!("{name}: scaled argmin costs {again} unscaled, optimum {o}")
            })?;
        }
        (None, None) => {}
        _ => return Err(format!("{name}: scaling changed feasibility")),
    }

    if objective.is_some() {
        let report = verify_solution(&base.solution, &model, 1e-6);
        ensure(report.pass, || format!("{name}: oracle solution fails verification\n{report}"))?;
    }

    if let Some(cmd) = solver {
        let run = run_external_solver(
            &model,
            &ExternalConfig {
                command: cmd.to_string(),
                time_limit: Some(Duration::from_secs(120)),
            },
        )
        .map_err(|e| format!("{name}: external solver: {e}"))?;
        let ext = run.solution;
        match (ext.status, objective) {
            (SolveStatus::Optimal, Some(o)) => {
                let e = ext.objective_or_recomputed(&model);
                ensure(close(e, o, 1e-6), || format!("{name}: external {e} vs oracle {o}"))?;
                let report = verify_solution(&ext, &model, 1e-6);
                ensure(report.pass, || format!("{name}: external solution fails verification\n{report}"))?;
                *compared += 1;
                optima.push(Optimum {
                    inst: inst.clone(),
                    model: model.clone(),
                    solution: ext,
                    origin: "external",
                });
            }
            (SolveStatus::Optimal, None) => {
                return Err(format!("{name}: external optimal on an instance the oracle proves infeasible"))
            }
            (SolveStatus::Infeasible, None) => {}
            (status, _) => return Err(format!("{name}: external status {status}: {:?}", run.diagnostics)),
        }
    }
    if objective.is_some() {
        optima.push(Optimum {
            inst: inst.clone(),
            model,
            solution: base.solution,
            origin: "oracle",
        });
    }
    Ok(())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let inst = hand_chain_instance();
    let model = build(&inst, true)?;
    let result = oracle(&inst, &model)?;
    let obj = result.certificate.best_objective.ok_or("hand instance infeasible")?;
    let b = breakdown_costs(&result.solution, &model, &inst).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for (what, got, want) in [
        ("objective", obj, 540.0),
        ("install", b.installation_total(), 400.0),
        ("operating", b.operating_total(), 40.0),
        ("transport", b.transport_total(), 100.0),
    ] {
        ensure((got - want).abs() <= 1e-9 * want, || format!("{what} {got}, expected {want}"))?;
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "objective 540 = 400 + 40 + 100 over {} configurations in {:.3} s",
        result.certificate.enumerated,
        elapsed.as_secs_f64()
    ))
}

/// Closed-form (columns, binaries, rows) for an instance where every source
/// supplies and every sink demands every material and every quota is set.
fn closed_form(inst: &Instance, prune: bool) -> (usize, usize, usize) {
    let t = inst.periods.len();
    let p = inst.materials.len();
    let (so, si) = (inst.sources.len(), inst.sinks.len());
    let sites = Echelon::ALL.map(|e| inst.echelon(e).candidate_sites.len());
    let sizes = Echelon::ALL.map(|e| inst.echelon(e).size_options.len());
    let ins = Echelon::ALL.map(|e| &inst.echelon(e).input_materials);
    let outs = Echelon::ALL.map(|e| &inst.echelon(e).output_materials);
    let shared = |a: &Vec<usize>, b: &Vec<usize>| a.iter().filter(|m| b.contains(m)).count();
    let m = if prune {
        [
            ins[0].len(),
            shared(outs[0], ins[1]),
            shared(outs[1], ins[2]),
            shared(outs[2], ins[3]),
            outs[3].len(),
        ]
    } else {
        [p; 5]
    };
    let flows = t
        * (m[0] * so * sites[0] * sizes[0]
            + m[1] * sites[0] * sites[1] * sizes[1]
            + m[2] * sites[1] * sites[2] * sizes[2]
            + m[3] * sites[2] * sites[3] * sizes[3]
            + m[4] * sites[3] * si);
    let installs: usize = (0..4).map(|e| sites[e] * sizes[e]).sum();
    let balance: usize = (0..4).map(|e| t * outs[e].len() * sites[e]).sum();
    let rows = t * p * si + t * p + t * p * so + balance + t * installs + sites.iter().sum::<usize>();
    (flows + installs, installs, rows)
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..10 {
        let shape = random_shape(&mut rng);
        let inst = random_instance(100 + k, shape);
        for prune in [true, false] {
            let m = build(&inst, prune)?;
            let got = (m.columns.len(), m.binary_columns().count(), m.rows.len());
            let want = closed_form(&inst, prune);
            ensure(got == want, || {
                format!("tuple {k} {shape:?} prune={prune}: (columns, binaries, rows) {got:?}, closed form {want:?}")
            })?;
            let demand = m.row_count(Family::Demand);
            ensure(demand == shape.periods * shape.materials * shape.sinks, || {
                format!("tuple {k}: {demand} demand rows")
            })?;
        }
    }
    let inst = generate(&GenSpec::default()).map_err(|e| e.to_string())?;
    let m = build(&inst, false)?;
    let binaries = m.binary_columns().count();
    let continuous = m.columns.len() - binaries;
    let want = closed_form(&inst, false);
    ensure((m.columns.len(), binaries) == (want.0, want.1), || {
        format!("case-study scale: {} columns {binaries} binaries, closed form {want:?}", m.columns.len())
    })?;
    ensure((1_000..10_000).contains(&binaries), || format!("{binaries} binaries, not of order 10^3"))?;
    ensure((1_000_000..10_000_000).contains(&continuous), || {
        format!("{continuous} continuous columns, not of order 10^6")
    })?;
    Ok(format!(
        "10 random tuples exact (prune on and off); generator defaults give {binaries} binaries, {continuous} continuous"
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let inst = economies_of_scale_instance();
    let raw = inst.transport_cost[&0];
    let dense = inst.transport_cost[&1];
    ensure(raw >= 10.0 * dense, || format!("transport ratio {}", raw / dense))?;
    let cpf = &inst.echelon(Echelon::Cpf).size_options;
    let exponent = (cpf[1].install_cost_annual / cpf[0].install_cost_annual).ln()
        / (cpf[1].max_capacity_tons / cpf[0].max_capacity_tons).ln();
    ensure(exponent <= 0.7 + 1e-12, || format!("scale exponent {exponent}"))?;

    let model = build(&inst, true)?;
    let result = oracle(&inst, &model)?;
    let config = result.certificate.best_configuration.ok_or("instance infeasible")?;
    let open = config.open_counts(&inst);
    let elapsed = start.elapsed();
    ensure(open[0] > open[2], || format!("opens {} CF and {} CPF", open[0], open[2]))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "optimum opens {} CF / {} RTF / {} CPF / {} DPF ({} configurations, {:.2} s)",
        open[0],
        open[1],
        open[2],
        open[3],
        result.certificate.enumerated,
        elapsed.as_secs_f64()
    ))
}

fn cli(args: &[&str]) -> Result<(), String> {
    let mut argv = vec!["upcycle-net"];
    argv.extend_from_slice(args);
    match upcycle_net::cli::run(argv.iter()) {
        0 => Ok(()),
        code => Err(format!("`{}` exited {code}", args.join(" "))),
    }
}

fn criterion_5() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let base = env!("CARGO_MANIFEST_DIR");
    let instance = format!("{base}/examples/data/six_node.toml");
    let path = |s: &str| dir.path().join(s).display().to_string();
    let read = |p: String| std::fs::read(&p).map_err(|e| format!("{p}: {e}"));
    for prune in ["on", "off"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = path(&format!("{prune}{run}"));
            cli(&["build", "--instance", &instance, "--prune", prune, "--out", &out])?;
            outputs.push(read(format!("{out}/model.mps"))?);
        }
        ensure(outputs[0] == outputs[1], || format!("prune={prune}: repeated builds differ"))?;
        let golden = read(format!("{base}/tests/golden/six_node_prune_{prune}.mps"))?;
        ensure(outputs[0] == golden, || format!("prune={prune}: MPS differs from golden file"))?;
    }
    let mut docs = Vec::new();
    for run in 0..2 {
        let out = path(&format!("gen{run}.toml"));
        cli(&["gen", "--seed", "7", "--out", &out])?;
        let text = String::from_utf8(read(out)?).map_err(|e| e.to_string())?;
        docs.push(parse_instance(&text).map_err(|e| e.to_string())?);
    }
    ensure(docs[0] == docs[1], || "gen --seed 7 produced different instances".into())?;
    let other = path("gen-other.toml");
    cli(&["gen", "--seed", "8", "--out", &other])?;
    let text = String::from_utf8(read(other)?).map_err(|e| e.to_string())?;
    ensure(parse_instance(&text).map_err(|e| e.to_string())? != docs[0], || {
        "seeds 7 and 8 produced the same instance".into()
    })?;
    Ok("MPS byte-identical across runs and equal to golden files (prune on/off); gen --seed reproducible".into())
}

fn criterion_6(optima: &[Optimum]) -> Check {
    let mut rows = 0;
    for o in optima {
        let name = format!("{} ({})", o.inst.name, o.origin);
        let x = &o.solution.values;
        for (r, row) in o.model.rows.iter().enumerate() {
            let lhs = row.activity(x);
            match row.key.family() {
                Family::FlowBalance => {
                    ensure(lhs.abs() <= 1e-7, || format!("{name}: {} = {lhs}", o.model.row_names[r]))?;
                    rows += 1;
                }
                Family::Quota => {
                    ensure(lhs >= row.rhs - 1e-7, || {
                        format!("{name}: {} = {lhs} < {}", o.model.row_names[r], row.rhs)
                    })?;
                    rows += 1;
                }
                _ => {}
            }
        }
        let mut inflow = std::collections::HashMap::<(Echelon, usize), f64>::new();
        let mut open = std::collections::HashSet::new();
        for (c, key) in o.model.index.keys().iter().enumerate() {
            match *key {
                VarKey::Flow(f) => {
                    if let Some(e) = f.leg.destination() {
                        *inflow.entry((e, f.dest)).or_default() += x[c];
                    }
                }
                VarKey::Install { echelon, site, .. } => {
                    if x[c] > 0.5 {
                        open.insert((echelon, site));
                    }
                }
            }
        }
        for (site, total) in inflow {
            ensure(open.contains(&site) || total.abs() <= 1e-7, || {
                format!("{name}: closed {:?} site {} receives {total}", site.0, site.1)
            })?;
        }
    }
    Ok(format!(
        "{} optimal solutions, {rows} balance/quota rows within 1e-7, closed sites carry no inflow",
        optima.len()
    ))
}

fn criterion_7(solver: Option<&str>) -> Outcome {
    let Some(cmd) = solver else {
        return Outcome::Skip("no external solver configured".into());
    };
    let spec = GenSpec {
        n_sources: 15,
        n_cf: 15,
        n_rtf: 6,
        n_cpf: 4,
        n_dpf: 4,
        n_sinks: 3,
        ..GenSpec::default()
    };
    let run = || -> Check {
        let inst = generate(&spec).map_err(|e| e.to_string())?;
        let model = build(&inst, true)?;
        // solver-side limits short enough to stop before optimality; grow
        // the limit until an incumbent exists
        let mut attempt = None;
        for limit in ["5", "20", "60"] {
            let run = run_external_solver(
                &model,
                &ExternalConfig {
                    command: cmd.replace("{time_limit}", limit),
                    time_limit: Some(Duration::from_secs(300)),
                },
            )
            .map_err(|e| e.to_string())?;
            let found = run.solution.objective_reported.is_some();
            attempt = Some((limit, run));
            if found {
                break;
            }
        }
        let (limit, run) = attempt.expect("at least one attempt");
        let sol = run.solution;
        ensure(matches!(sol.status, SolveStatus::Optimal | SolveStatus::Feasible), || {
            format!("status {}: {:?}", sol.status, run.diagnostics)
        })?;
        let report = verify_solution(&sol, &model, 1e-6);
        ensure(report.pass, || format!("incumbent fails verification\n{report}"))?;
        let obj = sol.objective_reported.ok_or("no objective reported")?;
        let bound = sol.bound.ok_or("solver emitted no bound")?;
        let gap = sol.gap.ok_or("no gap")?;
        let derived = (obj - bound) / obj.abs();
        ensure((gap - derived).abs() <= 1e-9, || format!("reported gap {gap}, (obj - bound)/obj = {derived}"))?;
        Ok(format!(
            "{} columns, {limit} s limit; status {}, objective {obj:.2}, bound {bound:.2}, gap {:.4}% matches (obj - bound)/obj",
            model.columns.len(),
            sol.status,
            100.0 * gap
        ))
    };
    match run() {
        Ok(s) => Outcome::Pass(s),
        Err(s) => Outcome::Fail(s),
    }
}

fn outcome(check: Check) -> Outcome {
    match check {
        Ok(s) => Outcome::Pass(s),
        Err(s) => Outcome::Fail(s),
    }
}

fn main() {
    let solver = external_solver_cmd();
    let mut optima = Vec::new();
    let results = [
        ("oracle/external equivalence on the tiny suite", criterion_1(solver.as_deref(), &mut optima)),
        ("hand instance exactness", outcome(criterion_2())),
        ("count formulas and case-study scale", outcome(criterion_3())),
        ("decentralized collection, centralized processing", outcome(criterion_4())),
        ("determinism of build and gen", outcome(criterion_5())),
        ("conservation on suite optima", outcome(criterion_6(&optima))),
        ("gap reporting on a time-limited external run", criterion_7(solver.as_deref())),
    ];
    let mut failed = 0;
    for (k, (title, result)) in results.iter().enumerate() {
        let (tag, detail) = match result {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("criterion {} [{title}]: {tag}: {detail}", k + 1);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
