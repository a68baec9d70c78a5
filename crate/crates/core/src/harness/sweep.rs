//! Monte Carlo success-rate sweep over geometric graphs.
//!
//! Per run index the sweep draws node positions, an attacker order and
//! initial values once. Every radius reuses the positions, every `f` takes a
//! prefix of the attacker order, and every scheme sees the same graph,
//! attackers and values, so per-cell comparisons are paired.

use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{AttackBehavior, AttackKind, DEFAULT_ACTIVATION, DEFAULT_TAMPER_OFFSET};
use crate::engine::{run, Outcome, RunConfig, Scheme, ThreatModel};
use crate::graph::{
    augment_with_relays, geometric_from_positions, is_strongly_connected, DirectedGraph, GeometricConfig, NodeId,
    Point,
};
use crate::protocol::SafetyInterval;

use super::HarnessError;

/// Resampling attempts before an f-local placement is given up.
const LOCAL_RESAMPLE_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackScenario {
    /// Attackers broadcast 120 from the activation round on.
    Static120,
    /// Attackers corrupt one in-neighbor's relayed value and stay consistent
    /// with the corrupted data.
    RelayTamper,
}

impl AttackScenario {
    pub fn as_str(self) -> &'static str {
        match self {
            AttackScenario::Static120 => "static-120",
            AttackScenario::RelayTamper => "relay-tamper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [AttackScenario::Static120, AttackScenario::RelayTamper]
            .into_iter()
            .find(|x| x.as_str() == s)
    }

    fn behavior(self, activation: usize) -> AttackBehavior {
        let kind = match self {
            AttackScenario::Static120 => AttackKind::StaticValue { value: 120.0 },
            AttackScenario::RelayTamper => AttackKind::RelayTamper {
                victim: None,
                offset: DEFAULT_TAMPER_OFFSET,
            },
        };
        AttackBehavior::starting(kind, activation)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub node_count: usize,
    pub box_side: f64,
    pub radius_grid: Vec<f64>,
    pub f_grid: Vec<usize>,
    pub runs_per_cell: usize,
    pub schemes: Vec<Scheme>,
    pub attack_scenario: AttackScenario,
    /// Adds `wmsr+relays` and `scheme2+relays` columns on the relay-augmented
    /// graphs of the same draws.
    pub relays_enabled: bool,
    pub initial_value_range: (f64, f64),
    pub base_seed: u64,
    /// `Local` resamples attacker sets that put more than `f` attackers in
    /// some normal node's in-neighborhood.
    pub threat_model: ThreatModel,
    pub activation: usize,
    pub max_rounds: usize,
    pub epsilon: f64,
    pub relay_count: usize,
    pub relay_radius_bonus: f64,
    pub relay_grid_spacing: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            node_count: 100,
            box_side: 100.0,
            radius_grid: (3..=26).map(|k| 5.0 * k as f64).collect(),
            f_grid: vec![15, 30, 45, 60],
            runs_per_cell: 20,
            schemes: Scheme::ALL.to_vec(),
            attack_scenario: AttackScenario::Static120,
            relays_enabled: true,
            initial_value_range: (0.0, 100.0),
            base_seed: 0,
            threat_model: ThreatModel::Total,
            activation: DEFAULT_ACTIVATION,
            max_rounds: 500,
            epsilon: 1e-6,
            relay_count: 16,
            relay_radius_bonus: 27.0,
            relay_grid_spacing: 20.0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.runs_per_cell == 0 {
            return bad("runs_per_cell must be at least 1");
        }
        if self.radius_grid.is_empty() || self.radius_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("radius_grid must be non-empty and strictly increasing");
        }
        if self.radius_grid.iter().any(|r| !(*r >= 0.0)) {
            return bad("radii must be non-negative");
        }
        if self.node_count == 0 {
            return bad("node_count must be positive");
        }
        if self.f_grid.iter().any(|&f| f >= self.node_count) {
            return bad("every f must be below node_count");
        }
        if self.schemes.is_empty() {
            return bad("schemes must be non-empty");
        }
        let (lo, hi) = self.initial_value_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad("initial_value_range must be finite with min <= max");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        self.geometric(0.0, 0).validate()?;
        Ok(())
    }

    fn geometric(&self, radius: f64, seed: u64) -> GeometricConfig {
        GeometricConfig {
            node_count: self.node_count,
            box_side: self.box_side,
            radius,
            relay_count: if self.relays_enabled { self.relay_count } else { 0 },
            relay_radius_bonus: self.relay_radius_bonus,
            relay_grid_spacing: self.relay_grid_spacing,
            seed,
        }
    }

    /// Column labels in output order.
    pub fn labels(&self) -> Vec<SchemeLabel> {
        let mut out = Vec::new();
        for &scheme in &self.schemes {
            out.push(SchemeLabel { scheme, relays: false });
            if self.relays_enabled && matches!(scheme, Scheme::Wmsr | Scheme::Scheme2) {
                out.push(SchemeLabel { scheme, relays: true });
            }
        }
        out
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        splitmix64(self.base_seed.wrapping_add(run as u64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeLabel {
    pub scheme: Scheme,
    pub relays: bool,
}

impl SchemeLabel {
    pub fn name(self) -> String {
        if self.relays {
            format!("{}+relays", self.scheme)
        } else {
            self.scheme.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: String,
    pub f: usize,
    pub r: f64,
    pub seed: u64,
    pub converged: bool,
    /// Rounds to convergence, or rounds executed when not converged.
    pub rounds: usize,
    pub final_spread: f64,
    pub safety_ok: bool,
    pub condition_ok: bool,
}

impl SweepRow {
    pub fn success(&self) -> bool {
        self.converged && self.safety_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub scheme: String,
    pub f: usize,
    pub r: f64,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean rounds to convergence over successful runs.
    pub mean_rounds: Option<f64>,
    pub condition_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub cells: Vec<CellStats>,
    /// Placement resampling events, one line each.
    pub log: Vec<String>,
}

impl SweepResult {
    /// Aggregates rows; consecutive rows with the same `(scheme, f, r)` form
    /// one cell.
    pub fn from_rows(rows: Vec<SweepRow>) -> Self {
        let mut cells: Vec<CellStats> = Vec::new();
        let mut i = 0;
        while i < rows.len() {
            let head = &rows[i];
            let mut j = i;
            while j < rows.len()
                && rows[j].scheme == head.scheme
                && rows[j].f == head.f
                && rows[j].r.to_bits() == head.r.to_bits()
            {
                j += 1;
            }
            let group = &rows[i..j];
            let runs = group.len();
            let successes = group.iter().filter(|r| r.success()).count();
            let mean_rounds = (successes > 0).then(|| {
                group.iter().filter(|r| r.success()).map(|r| r.rounds as f64).sum::<f64>() / successes as f64
            });
            cells.push(CellStats {
                scheme: head.scheme.clone(),
                f: head.f,
                r: head.r,
                runs,
                successes,
                success_rate: successes as f64 / runs as f64,
                mean_rounds,
                condition_rate: group.iter().filter(|r| r.condition_ok).count() as f64 / runs as f64,
            });
            i = j;
        }
        Self {
            rows,
            cells,
            log: Vec::new(),
        }
    }

    pub fn cell(&self, scheme: &str, f: usize, r: f64) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.scheme == scheme && c.f == f && c.r.to_bits() == r.to_bits())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row).map_err(|e| HarnessError::Io(e.to_string()))?;
        }
        out.flush().map_err(|e| HarnessError::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, HarnessError> {
        let mut input = csv::Reader::from_reader(r);
        let rows = input
            .deserialize()
            .collect::<Result<Vec<SweepRow>, _>>()
            .map_err(|e| HarnessError::Config(format!("csv: {e}")))?;
        Ok(Self::from_rows(rows))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Everything drawn once per run index.
#[derive(Debug, Clone)]
pub struct RunDraw {
    pub seed: u64,
    pub positions: Vec<Point>,
    pub attacker_order: Vec<NodeId>,
    pub initial_values: Vec<f64>,
}

impl RunDraw {
    pub fn new(cfg: &SweepConfig, run: usize) -> Self {
        let seed = cfg.run_seed(run);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions = (0..cfg.node_count)
            .map(|_| Point {
                x: rng.gen_range(0.0..cfg.box_side),
                y: rng.gen_range(0.0..cfg.box_side),
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 1));
        let mut attacker_order: Vec<NodeId> = (1..=cfg.node_count).collect();
        attacker_order.shuffle(&mut rng);
        let (lo, hi) = cfg.initial_value_range;
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 2));
        let initial_values = (0..cfg.node_count).map(|_| rng.gen_range(lo..=hi)).collect();
        Self {
            seed,
            positions,
            attacker_order,
            initial_values,
        }
    }
}

fn local_ok(g: &DirectedGraph, attackers: &[NodeId], f: usize) -> bool {
    let mut is_attacker = vec![false; g.node_count() + 1];
    for &a in attackers {
        is_attacker[a] = true;
    }
    g.nodes()
        .filter(|&i| !is_attacker[i])
        .all(|i| g.ins(i).iter().filter(|&&j| is_attacker[j]).count() <= f)
}

/// Structural condition each scheme's guarantee rests on, checked per graph.
/// `plain` needs a connected graph and no attackers; `wmsr` is held to the
/// in-degree bound `2f + 1` that `(f+1, f+1)`-robustness implies; the
/// detection schemes use their two-hop conditions.
pub fn condition_ok(g: &DirectedGraph, scheme: Scheme, f: usize) -> bool {
    match scheme {
        Scheme::Plain => f == 0 && is_strongly_connected(g),
        Scheme::Wmsr => g.min_in_degree() > 2 * f,
        Scheme::Scheme1 => g.check_scheme1_condition(f).is_ok_and(|c| c.holds()),
        Scheme::Scheme2 => g.min_scheme2_paths().is_none_or(|m| m > 2 * f),
    }
}

struct Job {
    run: usize,
    ri: usize,
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let labels = cfg.labels();
    let jobs: Vec<Job> = (0..cfg.runs_per_cell)
        .flat_map(|run| (0..cfg.radius_grid.len()).map(move |ri| Job { run, ri }))
        .collect();
    let outputs = jobs
        .par_iter()
        .map(|job| run_job(cfg, &labels, job))
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut keyed = Vec::new();
    let mut log = Vec::new();
    for (rows, events) in outputs {
        keyed.extend(rows);
        log.extend(events);
    }
    keyed.sort_by_key(|(key, _)| *key);
    log.sort();
    let mut result = SweepResult::from_rows(keyed.into_iter().map(|(_, row)| row).collect());
    result.log = log.into_iter().map(|(_, line)| line).collect();
    Ok(result)
}

type RowKey = (usize, usize, usize, usize);
type JobOutput = (Vec<(RowKey, SweepRow)>, Vec<((usize, usize, usize), String)>);

fn run_job(cfg: &SweepConfig, labels: &[SchemeLabel], job: &Job) -> Result<JobOutput, HarnessError> {
    let draw = RunDraw::new(cfg, job.run);
    let r = cfg.radius_grid[job.ri];
    let base = geometric_from_positions(&draw.positions, r);
    let relayed = if labels.iter().any(|l| l.relays) {
        Some(augment_with_relays(&base, &draw.positions, &cfg.geometric(r, draw.seed))?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut log = Vec::new();
    for (fi, &f) in cfg.f_grid.iter().enumerate() {
        let mut attackers: Vec<NodeId> = draw.attacker_order[..f].to_vec();
        if cfg.threat_model == ThreatModel::Local && !local_ok(&base, &attackers, f) {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(draw.seed ^ ((fi as u64) << 32) ^ job.ri as u64));
            let mut pool: Vec<NodeId> = (1..=cfg.node_count).collect();
            let mut placed = false;
            for attempt in 1..=LOCAL_RESAMPLE_LIMIT {
                pool.shuffle(&mut rng);
                if local_ok(&base, &pool[..f], f) {
                    attackers = pool[..f].to_vec();
                    log.push((
                        (job.run, fi, job.ri),
                        format!("run {} f {f} r {r}: attackers resampled for f-local placement (attempt {attempt})", job.run),
                    ));
                    placed = true;
                    break;
                }
            }
            if !placed {
                log.push((
                    (job.run, fi, job.ri),
                    format!("run {} f {f} r {r}: no f-local placement found, kept prefix", job.run),
                ));
            }
        }
        attackers.sort_unstable();
        for (li, label) in labels.iter().enumerate() {
            let graph = if label.relays {
                relayed.as_ref().expect("relay graph built").clone()
            } else {
                base.clone()
            };
            let cond = condition_ok(&graph, label.scheme, f);
            let mut rc = RunConfig::new(graph, label.scheme, f, draw.initial_values.clone());
            rc.threat_model = ThreatModel::Unchecked;
            rc.safety_interval = SafetyInterval::new(cfg.initial_value_range.0, cfg.initial_value_range.1);
            rc.max_rounds = cfg.max_rounds;
            rc.epsilon = cfg.epsilon;
            rc.seed = draw.seed;
            for &a in &attackers {
                rc.attacks.push((a, cfg.attack_scenario.behavior(cfg.activation)));
            }
            let rec = run(&rc)?;
            let ev = &rec.evaluation;
            rows.push((
                (li, fi, job.ri, job.run),
                SweepRow {
                    scheme: label.name(),
                    f,
                    r,
                    seed: draw.seed,
                    converged: ev.outcome == Outcome::Converged,
                    rounds: ev.rounds_to_converge.unwrap_or(rec.rounds_run()),
                    final_spread: ev.final_spread,
                    safety_ok: ev.safety_ok,
                    condition_ok: cond,
                },
            ));
        }
    }
    Ok((rows, log))
}
