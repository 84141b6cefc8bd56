#![allow(dead_code)]

use std::collections::BTreeMap;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upcycle_net::instance::{
    EchelonSpec, Instance, Material, Node, Period, Sink, SizeOption, Source, Units,
};

pub fn adapter_script() -> String {
    format!("{}/scripts/scipy_mps_solve.py", env!("CARGO_MANIFEST_DIR"))
}

/// Solver command from `UPCYCLE_NET_SOLVER_CMD`, else the bundled scipy
/// adapter when python3 with scipy's MILP interface is importable.
pub fn external_solver_cmd() -> Option<String> {
    if let Ok(cmd) = std::env::var("UPCYCLE_NET_SOLVER_CMD") {
        return Some(cmd).filter(|c| !c.trim().is_empty());
    }
    let ok = Command::new("python3")
        .args(["-c", "from scipy.optimize import milp"])
        .output()
        .is_ok_and(|o| o.status.success());
    ok.then(|| format!("python3 '{}' {{mps}} {{sol}} {{time_limit}}", adapter_script()))
}

/// Same network with every node list and size ladder reversed.
pub fn permuted(inst: &Instance) -> Instance {
    let mut out = inst.clone();
    out.sources.reverse();
    out.sinks.reverse();
    for e in &mut out.echelons {
        e.candidate_sites.reverse();
        e.size_options.reverse();
    }
    out
}

/// Every cost parameter multiplied by `k`.
pub fn scaled(inst: &Instance, k: f64) -> Instance {
    let mut out = inst.clone();
    for e in &mut out.echelons {
        e.op_cost_per_ton *= k;
        for s in &mut e.size_options {
            s.install_cost_annual *= k;
        }
    }
    for v in out.transport_cost.values_mut() {
        *v *= k;
    }
    out
}

/// Set sizes of a random instance: periods, materials, sources, sites and
/// sizes per echelon, sinks.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub periods: usize,
    pub materials: usize,
    pub sources: usize,
    pub sites: [usize; 4],
    pub sizes: [usize; 4],
    pub sinks: usize,
}

fn subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if s.is_empty() {
        s.push(rng.gen_range(0..n));
    }
    s
}

/// Random instance of the given shape. Every source supplies and every sink
/// demands every material in every period, every (period, material) has a
/// positive quota, and each echelon accepts at least one output of the
/// previous echelon.
pub fn random_instance(seed: u64, shape: Shape) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng, id: String| {
        Node::new(id, rng.gen_range(47.0..55.0), rng.gen_range(6.0..15.0))
    };
    let all_tp = |v: f64| -> BTreeMap<(usize, usize), f64> {
        (0..shape.periods)
            .flat_map(|t| (0..shape.materials).map(move |p| ((t, p), v)))
            .collect()
    };
    let mut echelons = Vec::new();
    let mut prev_out: Option<Vec<usize>> = None;
    for (k, tag) in ["cf", "rtf", "cpf", "dpf"].into_iter().enumerate() {
        let mut input = subset(&mut rng, shape.materials);
        if let Some(prev) = &prev_out {
            let p = prev[rng.gen_range(0..prev.len())];
            if !input.contains(&p) {
                input.push(p);
                input.sort_unstable();
            }
        }
        let output = subset(&mut rng, shape.materials);
        let sites = (0..shape.sites[k]).map(|s| point(&mut rng, format!("{tag}{s}"))).collect();
        echelons.push(EchelonSpec {
            candidate_sites: sites,
            size_options: (0..shape.sizes[k])
                .map(|c| SizeOption {
                    id: format!("z{c}"),
                    max_capacity_tons: 10.0 * (c + 1) as f64,
                    install_cost_annual: 100.0 * (c + 1) as f64,
                })
                .collect(),
            op_cost_per_ton: 1.0,
            input_materials: input,
            yields: output.iter().map(|&p| (p, 0.9)).collect(),
            output_materials: output.clone(),
        });
        prev_out = Some(output);
    }
    Instance {
        name: format!("random-{seed}"),
        units: Units::default(),
        materials: (0..shape.materials).map(|p| Material { id: format!("m{p}") }).collect(),
        periods: (0..shape.periods)
            .map(|t| Period {
                id: format!("t{t}"),
                duration_years: 1.0 / shape.periods as f64,
            })
            .collect(),
        sources: (0..shape.sources)
            .map(|i| Source {
                node: point(&mut rng, format!("so{i}")),
                supply: all_tp(5.0),
            })
            .collect(),
        sinks: (0..shape.sinks)
            .map(|n| Sink {
                node: point(&mut rng, format!("sk{n}")),
                demand: all_tp(3.0),
            })
            .collect(),
        echelons: echelons.try_into().expect("four echelons"),
        quota: all_tp(0.5),
        transport_cost: (0..shape.materials).map(|p| (p, 0.1)).collect(),
        circuity_factor: 1.0,
    }
}

pub fn random_shape(rng: &mut ChaCha8Rng) -> Shape {
    Shape {
        periods: rng.gen_range(1..=3),
        materials: rng.gen_range(1..=3),
        sources: rng.gen_range(1..=4),
        sites: [0; 4].map(|_| rng.gen_range(1..=4)),
        sizes: [0; 4].map(|_| rng.gen_range(1..=3)),
        sinks: rng.gen_range(1..=3),
    }
}
