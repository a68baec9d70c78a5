//! TOML configuration files for single runs and sweeps.
//!
//! Every file carries `spec_version = 1`. Unknown keys are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::adversary::{AttackBehavior, AttackKind, ScriptedOverride, DEFAULT_ACTIVATION, DEFAULT_TAMPER_OFFSET};
use crate::engine::{RunConfig, Scheme, ThreatModel};
use crate::graph::{generate_geometric, read_edge_list, DirectedGraph, GeometricConfig, NodeId};
use crate::protocol::SafetyInterval;

use super::sweep::{AttackScenario, SweepConfig};
use super::HarnessError;

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub kind: String,
    pub n: Option<usize>,
    pub path: Option<String>,
    pub layers: Option<usize>,
    pub width: Option<usize>,
    #[serde(default)]
    pub edges: Vec<[NodeId; 2]>,
    /// Treat the graph as a digraph, so `remove_edges` drops single arcs.
    pub directed: Option<bool>,
    pub radius: Option<f64>,
    pub box_side: Option<f64>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub remove_edges: Vec<[NodeId; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptStep {
    pub round: usize,
    pub own_value: Option<f64>,
    /// `[h, value]` pairs written into the relayed values.
    #[serde(default)]
    pub set_values: Vec<(NodeId, f64)>,
    /// Entries relayed as missing.
    #[serde(default)]
    pub blank_values: Vec<NodeId>,
    #[serde(default)]
    pub remove_values: Vec<NodeId>,
    pub declared: Option<Vec<NodeId>>,
    #[serde(default)]
    pub silent: bool,
    #[serde(default)]
    pub fake_reports: Vec<NodeId>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSpec {
    pub node: NodeId,
    pub kind: String,
    pub value: Option<f64>,
    pub victim: Option<NodeId>,
    pub partner: Option<NodeId>,
    pub offset: Option<f64>,
    pub activation: Option<usize>,
    #[serde(default)]
    pub script: Vec<ScriptStep>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub spec_version: u32,
    pub scheme: String,
    #[serde(default)]
    pub f: usize,
    pub threat_model: Option<String>,
    pub graph: GraphSpec,
    pub initial_values: Option<Vec<f64>>,
    /// Seeded uniform draw used when `initial_values` is absent.
    pub initial_range: Option<IntervalSpec>,
    #[serde(default)]
    pub attacks: Vec<AttackSpec>,
    pub safety_interval: Option<IntervalSpec>,
    pub max_rounds: Option<usize>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub record_messages: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub spec_version: u32,
    pub node_count: Option<usize>,
    pub box_side: Option<f64>,
    pub radius_grid: Option<Vec<f64>>,
    pub f_grid: Option<Vec<usize>>,
    pub runs_per_cell: Option<usize>,
    pub schemes: Option<Vec<String>>,
    pub attack_scenario: Option<String>,
    pub relays_enabled: Option<bool>,
    pub initial_value_range: Option<[f64; 2]>,
    pub base_seed: Option<u64>,
    pub threat_model: Option<String>,
    pub activation: Option<usize>,
    pub max_rounds: Option<usize>,
    pub epsilon: Option<f64>,
    pub relay_count: Option<usize>,
    pub relay_radius_bonus: Option<f64>,
    pub relay_grid_spacing: Option<f64>,
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn check_version(v: u32) -> Result<(), HarnessError> {
    if v != SPEC_VERSION {
        return Err(bad(format!("unsupported spec_version {v}, expected {SPEC_VERSION}")));
    }
    Ok(())
}

fn parse_scheme(s: &str) -> Result<Scheme, HarnessError> {
    Scheme::parse(s).ok_or_else(|| bad(format!("unknown scheme `{s}`")))
}

fn parse_threat(s: &str) -> Result<ThreatModel, HarnessError> {
    ThreatModel::parse(s).ok_or_else(|| bad(format!("unknown threat model `{s}`")))
}

fn need<T>(v: Option<T>, what: &str, kind: &str) -> Result<T, HarnessError> {
    v.ok_or_else(|| bad(format!("graph kind `{kind}` needs `{what}`")))
}

impl GraphSpec {
    /// `base` resolves relative file paths.
    pub fn build(&self, base: &Path) -> Result<DirectedGraph, HarnessError> {
        let k = self.kind.as_str();
        let mut g = match k {
            "file" => {
                let p = need(self.path.as_ref(), "path", k)?;
                read_edge_list(base.join(p))?
            }
            "complete" => DirectedGraph::complete(need(self.n, "n", k)?),
            "cycle" => DirectedGraph::cycle(need(self.n, "n", k)?),
            "directed-cycle" => DirectedGraph::directed_cycle(need(self.n, "n", k)?),
            "path" => DirectedGraph::path(need(self.n, "n", k)?),
            "layered" => DirectedGraph::layered(need(self.layers, "layers", k)?, need(self.width, "width", k)?),
            "edges" => {
                let n = need(self.n, "n", k)?;
                let undirected = !self.directed.unwrap_or(false);
                DirectedGraph::from_edges(n, undirected, self.edges.iter().map(|e| (e[0], e[1])))?
            }
            "geometric" => {
                let cfg = GeometricConfig {
                    node_count: need(self.n, "n", k)?,
                    box_side: self.box_side.unwrap_or(100.0),
                    radius: need(self.radius, "radius", k)?,
                    seed: self.seed.unwrap_or(0),
                    ..GeometricConfig::default()
                };
                generate_geometric(&cfg)?.0
            }
            other => return Err(bad(format!("unknown graph kind `{other}`"))),
        };
        if self.directed == Some(true) {
            g = g.into_directed();
        }
        for e in &self.remove_edges {
            g.remove_edge(e[0], e[1])?;
        }
        Ok(g)
    }
}

impl AttackSpec {
    pub fn behavior(&self) -> Result<AttackBehavior, HarnessError> {
        let offset = self.offset.unwrap_or(DEFAULT_TAMPER_OFFSET);
        let kind = match self.kind.as_str() {
            "honest-shadow" => AttackKind::HonestShadow,
            "static" => AttackKind::StaticValue {
                value: self
                    .value
                    .ok_or_else(|| bad(format!("static attacker {} needs `value`", self.node)))?,
            },
            "relay-tamper" => AttackKind::RelayTamper {
                victim: self.victim,
                offset,
            },
            "collusion-pair" => AttackKind::CollusionPair {
                partner: self
                    .partner
                    .ok_or_else(|| bad(format!("collusion attacker {} needs `partner`", self.node)))?,
                offset,
            },
            "crash" => AttackKind::Crash,
            "scripted" => {
                let mut script = BTreeMap::new();
                for s in &self.script {
                    let mut set_values: BTreeMap<NodeId, Option<f64>> =
                        s.set_values.iter().map(|(h, v)| (*h, Some(*v))).collect();
                    set_values.extend(s.blank_values.iter().map(|h| (*h, None)));
                    let o = ScriptedOverride {
                        own_value: s.own_value,
                        set_values,
                        remove_values: s.remove_values.iter().copied().collect(),
                        declared: s.declared.as_ref().map(|d| d.iter().copied().collect::<BTreeSet<_>>()),
                        silent: s.silent,
                        fake_reports: s.fake_reports.iter().copied().collect(),
                    };
                    if script.insert(s.round, o).is_some() {
                        return Err(bad(format!("attacker {} scripts round {} twice", self.node, s.round)));
                    }
                }
                AttackKind::Scripted { script }
            }
            other => return Err(bad(format!("unknown attack kind `{other}`"))),
        };
        Ok(AttackBehavior::starting(kind, self.activation.unwrap_or(DEFAULT_ACTIVATION)))
    }
}

impl RunFile {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let f: RunFile = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        check_version(f.spec_version)?;
        Ok(f)
    }

    pub fn into_run_config(self, base: &Path) -> Result<RunConfig, HarnessError> {
        let graph = self.graph.build(base)?;
        let n = graph.node_count();
        let seed = self.seed.unwrap_or(0);
        let initial = match (self.initial_values, self.initial_range) {
            (Some(v), None) => v,
            (None, Some(r)) => {
                if !(r.min <= r.max) {
                    return Err(bad("initial_range min exceeds max"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.gen_range(r.min..=r.max)).collect()
            }
            (Some(_), Some(_)) => return Err(bad("give either initial_values or initial_range, not both")),
            (None, None) => return Err(bad("missing initial_values or initial_range")),
        };
        let mut cfg = RunConfig::new(graph, parse_scheme(&self.scheme)?, self.f, initial);
        if let Some(t) = &self.threat_model {
            cfg.threat_model = parse_threat(t)?;
        }
        for a in &self.attacks {
            cfg.attacks.push((a.node, a.behavior()?));
        }
        if let Some(iv) = self.safety_interval {
            cfg.safety_interval = SafetyInterval::new(iv.min, iv.max);
        }
        if let Some(m) = self.max_rounds {
            cfg.max_rounds = m;
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        cfg.seed = seed;
        cfg.record_messages = self.record_messages;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reads a run file; relative graph paths resolve against its directory.
pub fn load_run_config(path: impl AsRef<Path>) -> Result<RunConfig, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    RunFile::parse(&text)?.into_run_config(base)
}

impl SweepFile {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let f: SweepFile = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        check_version(f.spec_version)?;
        Ok(f)
    }

    pub fn into_sweep_config(self) -> Result<SweepConfig, HarnessError> {
        let mut c = SweepConfig::default();
        if let Some(v) = self.node_count {
            c.node_count = v;
        }
        if let Some(v) = self.box_side {
            c.box_side = v;
        }
        if let Some(v) = self.radius_grid {
            c.radius_grid = v;
        }
        if let Some(v) = self.f_grid {
            c.f_grid = v;
        }
        if let Some(v) = self.runs_per_cell {
            c.runs_per_cell = v;
        }
        if let Some(v) = self.schemes {
            c.schemes = v.iter().map(|s| parse_scheme(s)).collect::<Result<_, _>>()?;
        }
        if let Some(v) = self.attack_scenario {
            c.attack_scenario =
                AttackScenario::parse(&v).ok_or_else(|| bad(format!("unknown attack scenario `{v}`")))?;
        }
        if let Some(v) = self.relays_enabled {
            c.relays_enabled = v;
        }
        if let Some([lo, hi]) = self.initial_value_range {
            c.initial_value_range = (lo, hi);
        }
        if let Some(v) = self.base_seed {
            c.base_seed = v;
        }
        if let Some(v) = self.threat_model {
            c.threat_model = parse_threat(&v)?;
        }
        if let Some(v) = self.activation {
            c.activation = v;
        }
        if let Some(v) = self.max_rounds {
            c.max_rounds = v;
        }
        if let Some(v) = self.epsilon {
            c.epsilon = v;
        }
        if let Some(v) = self.relay_count {
            c.relay_count = v;
        }
        if let Some(v) = self.relay_radius_bonus {
            c.relay_radius_bonus = v;
        }
        if let Some(v) = self.relay_grid_spacing {
            c.relay_grid_spacing = v;
        }
        c.validate()?;
        Ok(c)
    }
}

pub fn load_sweep_config(path: impl AsRef<Path>) -> Result<SweepConfig, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    SweepFile::parse(&text)?.into_sweep_config()
}
