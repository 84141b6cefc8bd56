//! Seeded synthetic instances.
//!
//! [`GenSpec::default`] is the `pur-de` pack: a Germany-sized bounding box,
//! lightweight raw foam waste that is expensive to haul, densified
//! intermediates (briquettes, pyrolysis oil) that are cheap to haul, eight
//! CF size options and five for every other echelon, three 4-month periods,
//! and 10–30 % seasonal supply swings. All numeric defaults are generator
//! settings, not measured data.
//!
//! Randomness comes from ChaCha8 seeded with `seed`; uniforms are built from
//! the top 53 bits of each `next_u64`. Draw order:
//!
//! 1. source coordinates (lat, lon) per source;
//! 2. base supply per source, log-uniform in `base_supply_tons`;
//! 3. per period: variation magnitude, then sign;
//! 4. coordinates for candidate sites beyond the reused source (CF, RTF,
//!    CPF) or CPF (DPF) locations, in echelon order;
//! 5. sink coordinates.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geo::EARTH_RADIUS_KM;
use crate::instance::{
    EchelonSpec, Instance, Material, Node, Period, Sink, SizeOption, Source, Units,
};

/// Discrete size options: capacity_s = base_capacity · growth^s and
/// cost_s = base_install_cost · growth^(s · scale_exponent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeLadder {
    pub count: usize,
    pub base_capacity: f64,
    pub growth_ratio: f64,
    pub base_install_cost: f64,
    /// Below 1: bigger plants are cheaper per ton of capacity.
    pub scale_exponent: f64,
}

impl SizeLadder {
    pub fn options(&self) -> Vec<SizeOption> {
        (0..self.count)
            .map(|s| {
                let ratio = self.growth_ratio.powi(s as i32);
                SizeOption {
                    id: format!("s{}", s + 1),
                    max_capacity_tons: self.base_capacity * ratio,
                    install_cost_annual: self.base_install_cost * ratio.powf(self.scale_exponent),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub id: String,
    /// Cost per ton-km.
    pub transport_cost: f64,
}

/// One facility echelon: a single input turned into a single output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub input: String,
    pub output: String,
    pub yield_factor: f64,
    pub op_cost_per_ton: f64,
    pub ladder: SizeLadder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub name: String,
    pub seed: u64,
    pub n_sources: usize,
    pub n_cf: usize,
    pub n_rtf: usize,
    pub n_cpf: usize,
    pub n_dpf: usize,
    pub n_sinks: usize,
    pub n_periods: usize,
    /// Per-period durations; empty means `n_periods` equal parts of a year.
    #[serde(default)]
    pub period_durations_years: Vec<f64>,
    /// Range of the per-period supply swing, in percent.
    pub supply_variation_pct: [f64; 2],
    /// Log-uniform range of each source's base supply per period.
    pub base_supply_tons: [f64; 2],
    pub bbox: BoundingBox,
    /// Collection quota on the raw material.
    pub quota: f64,
    /// Sink demand relative to the full yield-chained supply.
    pub demand_headroom: f64,
    pub materials: Vec<MaterialSpec>,
    /// CF, RTF, CPF, DPF in order.
    pub stages: Vec<StageSpec>,
}

impl Default for GenSpec {
    fn default() -> Self {
        let ladder = |count, base_capacity, growth_ratio, base_install_cost| SizeLadder {
            count,
            base_capacity,
            growth_ratio,
            base_install_cost,
            scale_exponent: 0.6,
        };
        let stage = |input: &str, output: &str, yield_factor, op_cost_per_ton, ladder| StageSpec {
            input: input.into(),
            output: output.into(),
            yield_factor,
            op_cost_per_ton,
            ladder,
        };
        Self {
            name: "pur-de".into(),
            seed: 42,
            n_sources: 100,
            n_cf: 100,
            n_rtf: 40,
            n_cpf: 20,
            n_dpf: 20,
            n_sinks: 10,
            n_periods: 3,
            period_durations_years: Vec::new(),
            supply_variation_pct: [10.0, 30.0],
            base_supply_tons: [20.0, 400.0],
            bbox: BoundingBox {
                lat_min: 47.3,
                lat_max: 55.0,
                lon_min: 5.9,
                lon_max: 15.0,
            },
            quota: 0.5,
            demand_headroom: 1.5,
            materials: vec![
                MaterialSpec {
                    id: "pur_waste".into(),
                    transport_cost: 0.30,
                },
                MaterialSpec {
                    id: "briquettes".into(),
                    transport_cost: 0.03,
                },
                MaterialSpec {
                    id: "pyrolysis_oil".into(),
                    transport_cost: 0.01,
                },
                MaterialSpec {
                    id: "amine_feed".into(),
                    transport_cost: 0.01,
                },
            ],
            stages: vec![
                stage("pur_waste", "pur_waste", 1.0, 15.0, ladder(8, 200.0, 1.5, 20_000.0)),
                stage("pur_waste", "briquettes", 0.95, 40.0, ladder(5, 1_000.0, 2.0, 150_000.0)),
                stage(
                    "briquettes",
                    "pyrolysis_oil",
                    0.7,
                    120.0,
                    ladder(5, 2_000.0, 2.0, 2_000_000.0),
                ),
                stage(
                    "pyrolysis_oil",
                    "amine_feed",
                    0.85,
                    60.0,
                    ladder(5, 1_500.0, 2.0, 1_000_000.0),
                ),
            ],
        }
    }
}

impl GenSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::GenSpec(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("generator spec serializes")
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::GenSpec(m));
        let counts = [
            ("n_sources", self.n_sources),
            ("n_cf", self.n_cf),
            ("n_rtf", self.n_rtf),
            ("n_cpf", self.n_cpf),
            ("n_dpf", self.n_dpf),
            ("n_sinks", self.n_sinks),
            ("n_periods", self.n_periods),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, n)| *n == 0) {
            return bad(format!("{name} must be at least 1"));
        }
        let [lo, hi] = self.supply_variation_pct;
        if !(0.0 <= lo && lo <= hi && hi < 100.0) {
            return bad(format!("supply_variation_pct must satisfy 0 <= lo <= hi < 100, got [{lo}, {hi}]"));
        }
        let [slo, shi] = self.base_supply_tons;
        if !(slo > 0.0 && slo <= shi && shi.is_finite()) {
            return bad(format!("base_supply_tons must satisfy 0 < lo <= hi, got [{slo}, {shi}]"));
        }
        let b = &self.bbox;
        if !(-90.0 <= b.lat_min
            && b.lat_min <= b.lat_max
            && b.lat_max <= 90.0
            && -180.0 <= b.lon_min
            && b.lon_min <= b.lon_max
            && b.lon_max <= 180.0)
        {
            return bad("bbox must be an ordered rectangle of valid coordinates".into());
        }
        if !(0.0..=1.0).contains(&self.quota) {
            return bad(format!("quota must lie in [0, 1], got {}", self.quota));
        }
        if !(self.demand_headroom >= 0.0) {
            return bad("demand_headroom must be >= 0".into());
        }
        if !self.period_durations_years.is_empty()
            && (self.period_durations_years.len() != self.n_periods
                || self.period_durations_years.iter().any(|&d| !(d > 0.0)))
        {
            return bad("period_durations_years must list n_periods positive values".into());
        }
        if self.stages.len() != 4 {
            return bad(format!("expected 4 stages (CF, RTF, CPF, DPF), got {}", self.stages.len()));
        }
        for (k, st) in self.stages.iter().enumerate() {
            for id in [&st.input, &st.output] {
                if !self.materials.iter().any(|m| &m.id == id) {
                    return bad(format!("stage {k} references unknown material '{id}'"));
                }
            }
            let l = &st.ladder;
            if l.count == 0 || !(l.growth_ratio > 1.0) || !(l.base_capacity >= 0.0) || !(l.base_install_cost >= 0.0) {
                return bad(format!("stage {k}: ladder needs count >= 1, growth_ratio > 1, nonnegative base values"));
            }
            if !(st.yield_factor >= 0.0) || !(st.op_cost_per_ton >= 0.0) {
                return bad(format!("stage {k}: yield and operating cost must be >= 0"));
            }
        }
        for w in self.stages.windows(2) {
            if w[0].output != w[1].input {
                return bad(format!(
                    "stage output '{}' does not feed the next stage input '{}'",
                    w[0].output, w[1].input
                ));
            }
        }
        Ok(())
    }
}

struct Draws(ChaCha8Rng);

impl Draws {
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    fn point(&mut self, b: &BoundingBox) -> (f64, f64) {
        let lat = self.uniform(b.lat_min, b.lat_max);
        let lon = self.uniform(b.lon_min, b.lon_max);
        (lat, lon)
    }
}

/// Builds the instance described by `spec`. Pure in `spec`, seed included.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    spec.check()?;
    let mut rng = Draws(ChaCha8Rng::seed_from_u64(spec.seed));

    let source_pts: Vec<(f64, f64)> = (0..spec.n_sources).map(|_| rng.point(&spec.bbox)).collect();
    let [slo, shi] = spec.base_supply_tons;
    let base_supply: Vec<f64> = (0..spec.n_sources)
        .map(|_| rng.uniform(slo.ln(), shi.ln()).exp())
        .collect();
    let [vlo, vhi] = spec.supply_variation_pct;
    let swing: Vec<f64> = (0..spec.n_periods)
        .map(|_| {
            let magnitude = rng.uniform(vlo, vhi) / 100.0;
            if rng.unit() < 0.5 {
                -magnitude
            } else {
                magnitude
            }
        })
        .collect();
    let sites = |n: usize, reuse: &[(f64, f64)], rng: &mut Draws| -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| reuse.get(k).copied().unwrap_or_else(|| rng.point(&spec.bbox)))
            .collect()
    };
    let cf_pts = sites(spec.n_cf, &source_pts, &mut rng);
    let rtf_pts = sites(spec.n_rtf, &source_pts, &mut rng);
    let cpf_pts = sites(spec.n_cpf, &source_pts, &mut rng);
    let dpf_pts = sites(spec.n_dpf, &cpf_pts, &mut rng);
    let sink_pts: Vec<(f64, f64)> = (0..spec.n_sinks).map(|_| rng.point(&spec.bbox)).collect();

    let materials: Vec<Material> = spec
        .materials
        .iter()
        .map(|m| Material { id: m.id.clone() })
        .collect();
    let mat = |id: &str| spec.materials.iter().position(|m| m.id == id).expect("checked");
    let raw = mat(&spec.stages[0].input);
    let terminal = mat(&spec.stages[3].output);

    let durations: Vec<f64> = if spec.period_durations_years.is_empty() {
        vec![1.0 / spec.n_periods as f64; spec.n_periods]
    } else {
        spec.period_durations_years.clone()
    };
    let periods: Vec<Period> = durations
        .iter()
        .enumerate()
        .map(|(t, &d)| Period {
            id: format!("t{}", t + 1),
            duration_years: d,
        })
        .collect();

    let width = |n: usize| n.to_string().len().max(2);
    let node = |prefix: &str, k: usize, n: usize, (lat, lon): (f64, f64)| {
        Node::new(format!("{prefix}{:0w$}", k + 1, w = width(n)), lat, lon)
    };

    let sources: Vec<Source> = source_pts
        .iter()
        .enumerate()
        .map(|(i, &pt)| Source {
            node: node("so", i, spec.n_sources, pt),
            supply: (0..spec.n_periods)
                .map(|t| ((t, raw), base_supply[i] * (1.0 + swing[t])))
                .collect(),
        })
        .collect();

    let chain_yield: f64 = spec.stages.iter().map(|s| s.yield_factor).product();
    let sinks: Vec<Sink> = sink_pts
        .iter()
        .enumerate()
        .map(|(n, &pt)| Sink {
            node: node("sk", n, spec.n_sinks, pt),
            demand: (0..spec.n_periods)
                .map(|t| {
                    let supply: f64 = sources.iter().map(|s| s.supply[&(t, raw)]).sum();
                    (
                        (t, terminal),
                        supply * chain_yield * spec.demand_headroom / spec.n_sinks as f64,
                    )
                })
                .collect(),
        })
        .collect();

    let echelon = |k: usize, prefix: &str, pts: &[(f64, f64)]| {
        let st = &spec.stages[k];
        let output = mat(&st.output);
        EchelonSpec {
            candidate_sites: pts
                .iter()
                .enumerate()
                .map(|(s, &pt)| node(prefix, s, pts.len(), pt))
                .collect(),
            size_options: st.ladder.options(),
            op_cost_per_ton: st.op_cost_per_ton,
            input_materials: vec![mat(&st.input)],
            output_materials: vec![output],
            yields: BTreeMap::from([(output, st.yield_factor)]),
        }
    };

    Ok(Instance {
        name: spec.name.clone(),
        units: Units::default(),
        materials,
        periods,
        sources,
        sinks,
        echelons: [
            echelon(0, "cf", &cf_pts),
            echelon(1, "rtf", &rtf_pts),
            echelon(2, "cpf", &cpf_pts),
            echelon(3, "dpf", &dpf_pts),
        ],
        quota: if spec.quota > 0.0 {
            (0..spec.n_periods).map(|t| ((t, raw), spec.quota)).collect()
        } else {
            BTreeMap::new()
        },
        transport_cost: spec
            .materials
            .iter()
            .enumerate()
            .map(|(p, m)| (p, m.transport_cost))
            .collect(),
        circuity_factor: 1.0,
    })
}

fn single_material_echelon(site: Node, capacity: f64, install: f64) -> EchelonSpec {
    EchelonSpec {
        candidate_sites: vec![site],
        size_options: vec![SizeOption {
            id: "std".into(),
            max_capacity_tons: capacity,
            install_cost_annual: install,
        }],
        op_cost_per_ton: 1.0,
        input_materials: vec![0],
        output_materials: vec![0],
        yields: BTreeMap::from([(0, 1.0)]),
    }
}

/// Single chain: one node per echelon spaced exactly 10 km apart along the
/// equator, 10 t of supply that must all be collected, unit yields,
/// t_p = 0.1, α^o = 1, α^I = 100, ΔT = 1, sink demand 10 t.
/// Optimal cost 540 = 400 install + 40 operating + 100 transport.
pub fn hand_chain_instance() -> Instance {
    let step = (10.0 / EARTH_RADIUS_KM).to_degrees();
    let at = |id: &str, k: u32| Node::new(id, 0.0, step * k as f64);
    Instance {
        name: "hand-chain".into(),
        units: Units::default(),
        materials: vec![Material { id: "waste".into() }],
        periods: vec![Period {
            id: "t1".into(),
            duration_years: 1.0,
        }],
        sources: vec![Source {
            node: at("s1", 0),
            supply: BTreeMap::from([((0, 0), 10.0)]),
        }],
        sinks: vec![Sink {
            node: at("n1", 5),
            demand: BTreeMap::from([((0, 0), 10.0)]),
        }],
        echelons: [
            single_material_echelon(at("cf1", 1), 20.0, 100.0),
            single_material_echelon(at("rtf1", 2), 20.0, 100.0),
            single_material_echelon(at("cpf1", 3), 20.0, 100.0),
            single_material_echelon(at("dpf1", 4), 20.0, 100.0),
        ],
        quota: BTreeMap::from([((0, 0), 1.0)]),
        transport_cost: BTreeMap::from([(0, 0.1)]),
        circuity_factor: 1.0,
    }
}

/// One node per role (six nodes), two materials, two size options at RTF and
/// CPF; CF accepts only the raw waste.
pub fn six_node_instance() -> Instance {
    let two_sizes = |cap: f64, cost: f64| {
        vec![
            SizeOption {
                id: "small".into(),
                max_capacity_tons: cap,
                install_cost_annual: cost,
            },
            SizeOption {
                id: "large".into(),
                max_capacity_tons: 3.0 * cap,
                install_cost_annual: cost * 3f64.powf(0.6),
            },
        ]
    };
    let stage = |site: Node, sizes: Vec<SizeOption>, input: usize, output: usize, y: f64| EchelonSpec {
        candidate_sites: vec![site],
        size_options: sizes,
        op_cost_per_ton: 2.0,
        input_materials: vec![input],
        output_materials: vec![output],
        yields: BTreeMap::from([(output, y)]),
    };
    Instance {
        name: "six-node".into(),
        units: Units::default(),
        materials: vec![Material { id: "waste".into() }, Material { id: "oil".into() }],
        periods: vec![
            Period {
                id: "t1".into(),
                duration_years: 0.5,
            },
            Period {
                id: "t2".into(),
                duration_years: 0.5,
            },
        ],
        sources: vec![Source {
            node: Node::new("dortmund", 51.5136, 7.4653),
            supply: BTreeMap::from([((0, 0), 30.0), ((1, 0), 24.0)]),
        }],
        sinks: vec![Sink {
            node: Node::new("ludwigshafen", 49.4774, 8.4452),
            demand: BTreeMap::from([((0, 1), 40.0), ((1, 1), 40.0)]),
        }],
        echelons: [
            stage(Node::new("bochum", 51.4818, 7.2162), vec![two_sizes(20.0, 50.0)[1].clone()], 0, 0, 1.0),
            stage(Node::new("essen", 51.4556, 7.0116), two_sizes(20.0, 80.0), 0, 0, 0.9),
            stage(Node::new("koeln", 50.9375, 6.9603), two_sizes(15.0, 200.0), 0, 1, 0.6),
            stage(Node::new("koeln-d", 50.9375, 6.9603), vec![two_sizes(15.0, 120.0)[1].clone()], 1, 1, 0.95),
        ],
        quota: BTreeMap::from([((0, 0), 0.5), ((1, 0), 0.5)]),
        transport_cost: BTreeMap::from([(0, 0.4), (1, 0.02)]),
        circuity_factor: 1.0,
    }
}

/// Designed to exhibit decentralized collection with centralized chemical
/// processing: three far-apart sources whose raw waste costs 20× the
/// densified product to haul, and a CPF ladder with scale exponent 0.6
/// where one large plant beats two small ones.
pub fn economies_of_scale_instance() -> Instance {
    let sizes = |base_cap: f64, base_cost: f64, n: usize| {
        (0..n)
            .map(|s| {
                let ratio = 3f64.powi(s as i32);
                SizeOption {
                    id: format!("s{}", s + 1),
                    max_capacity_tons: base_cap * ratio,
                    install_cost_annual: base_cost * ratio.powf(0.6),
                }
            })
            .collect::<Vec<_>>()
    };
    let cities = [
        Node::new("hamburg", 53.5511, 9.9937),
        Node::new("koeln", 50.9375, 6.9603),
        Node::new("muenchen", 48.1351, 11.5820),
    ];
    let kassel = Node::new("kassel", 51.3127, 9.4797);
    let frankfurt = Node::new("frankfurt", 50.1109, 8.6821);
    let stage = |sites: Vec<Node>, size_options: Vec<SizeOption>, input: usize, output: usize, y: f64, op: f64| EchelonSpec {
        candidate_sites: sites,
        size_options,
        op_cost_per_ton: op,
        input_materials: vec![input],
        output_materials: vec![output],
        yields: BTreeMap::from([(output, y)]),
    };
    Instance {
        name: "economies-of-scale".into(),
        units: Units::default(),
        materials: vec![Material { id: "foam".into() }, Material { id: "oil".into() }],
        periods: vec![Period {
            id: "t1".into(),
            duration_years: 1.0,
        }],
        sources: cities
            .iter()
            .map(|c| Source {
                node: Node::new(format!("src-{}", c.id), c.lat, c.lon),
                supply: BTreeMap::from([((0, 0), 30.0)]),
            })
            .collect(),
        sinks: vec![Sink {
            node: Node::new("ludwigshafen", 49.4774, 8.4452),
            demand: BTreeMap::from([((0, 1), 100.0)]),
        }],
        echelons: [
            stage(cities.to_vec(), sizes(40.0, 200.0, 1), 0, 0, 1.0, 5.0),
            stage(vec![kassel.clone()], sizes(120.0, 400.0, 1), 0, 0, 1.0, 5.0),
            stage(vec![kassel.clone(), frankfurt], sizes(50.0, 1_000.0, 2), 0, 1, 0.7, 20.0),
            stage(vec![kassel], sizes(100.0, 500.0, 1), 1, 1, 1.0, 5.0),
        ],
        quota: BTreeMap::from([((0, 0), 1.0)]),
        transport_cost: BTreeMap::from([(0, 1.0), (1, 0.05)]),
        circuity_factor: 1.0,
    }
}

/// Generator spec for one desk-scale suite member.
fn tiny_spec(seed: u64, counts: [usize; 6], sizes: usize, periods: usize, quota: f64) -> GenSpec {
    let ladder = |base_capacity, base_install_cost| SizeLadder {
        count: sizes,
        base_capacity,
        growth_ratio: 2.0,
        base_install_cost,
        scale_exponent: 0.6,
    };
    let stage = |input: &str, output: &str, yield_factor, op_cost_per_ton, ladder| StageSpec {
        input: input.into(),
        output: output.into(),
        yield_factor,
        op_cost_per_ton,
        ladder,
    };
    GenSpec {
        name: format!("tiny-{seed}"),
        seed,
        n_sources: counts[0],
        n_cf: counts[1],
        n_rtf: counts[2],
        n_cpf: counts[3],
        n_dpf: counts[4],
        n_sinks: counts[5],
        n_periods: periods,
        period_durations_years: Vec::new(),
        supply_variation_pct: [10.0, 30.0],
        base_supply_tons: [5.0, 20.0],
        bbox: BoundingBox {
            lat_min: 50.8,
            lat_max: 52.0,
            lon_min: 6.5,
            lon_max: 8.5,
        },
        quota,
        demand_headroom: 1.5,
        materials: vec![
            MaterialSpec {
                id: "waste".into(),
                transport_cost: 0.5,
            },
            MaterialSpec {
                id: "product".into(),
                transport_cost: 0.05,
            },
        ],
        stages: vec![
            stage("waste", "waste", 1.0, 2.0, ladder(40.0, 50.0)),
            stage("waste", "waste", 0.9, 3.0, ladder(60.0, 80.0)),
            stage("waste", "product", 0.6, 5.0, ladder(60.0, 300.0)),
            stage("product", "product", 0.95, 4.0, ladder(40.0, 200.0)),
        ],
    }
}

/// Configurations the oracle would enumerate for the given site counts.
fn config_count(counts: [usize; 6], sizes: usize) -> u64 {
    counts[1..5]
        .iter()
        .map(|&n| ((sizes + 1) as u64).pow(n as u32))
        .product()
}

/// Desk-scale instances for oracle cross-checks (52 members).
///
/// Member 0 is [`hand_chain_instance`] and member 1 is
/// [`economies_of_scale_instance`]. The rest are generated with at most three
/// sites per echelon, two size options, two periods and two materials.
/// Quotas cycle through 0.5, 1, 0.25, 0 and 0.75, and every seventh member
/// has a CF ladder too small for its quota. CF, RTF and CPF sites sit on
/// source locations and DPF sites on CPF locations, so zero-length legs are
/// common.
pub fn make_tiny_suite(seed: u64) -> Vec<Instance> {
    let mut rng = Draws(ChaCha8Rng::seed_from_u64(seed));
    let mut pick = |lo: usize, hi: usize| lo + (rng.unit() * (hi - lo + 1) as f64) as usize % (hi - lo + 1);
    let mut suite = vec![hand_chain_instance(), economies_of_scale_instance()];
    let mut k = 0u64;
    while suite.len() < 52 {
        let counts = [
            pick(1, 3),
            pick(1, 3),
            pick(1, 2),
            pick(1, 2),
            pick(1, 2),
            pick(1, 2),
        ];
        let sizes = pick(1, 2);
        let periods = pick(1, 2);
        if config_count(counts, sizes) > 400 {
            continue;
        }
        let quota = [0.5, 1.0, 0.25, 0.0, 0.75][(k % 5) as usize];
        let mut spec = tiny_spec(seed.wrapping_mul(1000).wrapping_add(k), counts, sizes, periods, quota);
        if k % 7 == 6 {
            spec.quota = 1.0;
            spec.stages[0].ladder.base_capacity = 1.0;
        }
        suite.push(generate(&spec).expect("tiny spec is valid"));
        k += 1;
    }
    suite
}
