//! Synchronous round loop.
//!
//! Round `k` for every node: build `Φ_i[k]` (attackers rewrite theirs),
//! deliver, detect, merge flags (share or reports), update to `x[k+1]`.
//! The run stops at the first round whose normal-node spread is at most
//! `epsilon`, provided every scheduled attack event is at least two rounds
//! in the past, or at `max_rounds`.

mod oracle;
mod record;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::adversary::{apply_attack, AttackBehavior, OmniscientView};
use crate::graph::{DirectedGraph, NodeId};
use crate::protocol::{
    algorithm1_detect, algorithm2_detect, AgentState, Broadcast, DetectionVerdict, SafetyInterval,
    UpdateRule,
};

pub use oracle::{detection_share_oracle, OracleDecision, Report};
pub use record::{
    evaluate, fmt_sig, render_message_trace, render_trace, AttackerSummary, Evaluation, FlagEvent,
    Outcome, RunRecord, TRACE_HEADER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Plain,
    Wmsr,
    Scheme1,
    Scheme2,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Plain, Scheme::Wmsr, Scheme::Scheme1, Scheme::Scheme2];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Plain => "plain",
            Scheme::Wmsr => "wmsr",
            Scheme::Scheme1 => "scheme1",
            Scheme::Scheme2 => "scheme2",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        Scheme::ALL.into_iter().find(|x| x.as_str() == s)
    }

    pub fn detects(self) -> bool {
        matches!(self, Scheme::Scheme1 | Scheme::Scheme2)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreatModel {
    /// At most `f` attackers overall.
    Total,
    /// At most `f` attackers among any normal node's in-neighbors.
    Local,
    /// Attacker placement is not checked against `f`.
    Unchecked,
}

impl ThreatModel {
    pub fn parse(s: &str) -> Option<ThreatModel> {
        match s {
            "total" => Some(ThreatModel::Total),
            "local" => Some(ThreatModel::Local),
            "unchecked" => Some(ThreatModel::Unchecked),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("scheme1 requires an undirected graph")]
    Scheme1NeedsUndirected,
    #[error("scheme1 supports only the f-total threat model")]
    Scheme1NeedsTotal,
    #[error("{count} attackers exceed f = {f}")]
    TooManyAttackers { count: usize, f: usize },
    #[error("node {node} has {count} attacking in-neighbors, more than f = {f}")]
    LocalBoundExceeded { node: NodeId, count: usize, f: usize },
    #[error("expected {expected} initial values, got {got}")]
    InitialValues { expected: usize, got: usize },
    #[error("initial value of node {0} is not finite")]
    NonFiniteValue(NodeId),
    #[error("attacker id {0} out of range")]
    AttackerOutOfRange(NodeId),
    #[error("node {0} has more than one attack behavior")]
    DuplicateAttacker(NodeId),
    #[error("convergence epsilon must be positive")]
    BadEpsilon,
    #[error("safety interval minimum exceeds maximum")]
    BadInterval,
    #[error("graph has no nodes")]
    EmptyGraph,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub graph: DirectedGraph,
    pub scheme: Scheme,
    pub f: usize,
    pub threat_model: ThreatModel,
    pub initial_values: Vec<f64>,
    pub attacks: Vec<(NodeId, AttackBehavior)>,
    pub safety_interval: SafetyInterval,
    pub max_rounds: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub record_messages: bool,
}

impl RunConfig {
    pub fn new(graph: DirectedGraph, scheme: Scheme, f: usize, initial_values: Vec<f64>) -> Self {
        Self {
            graph,
            scheme,
            f,
            threat_model: ThreatModel::Total,
            initial_values,
            attacks: Vec::new(),
            safety_interval: SafetyInterval::default(),
            max_rounds: 500,
            epsilon: 1e-6,
            seed: 0,
            record_messages: false,
        }
    }

    pub fn with_attack(mut self, node: NodeId, behavior: AttackBehavior) -> Self {
        self.attacks.push((node, behavior));
        self
    }

    pub fn attackers(&self) -> BTreeSet<NodeId> {
        self.attacks.iter().map(|(id, _)| *id).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.graph.node_count();
        if n == 0 {
            return Err(ConfigError::EmptyGraph);
        }
        if self.initial_values.len() != n {
            return Err(ConfigError::InitialValues {
                expected: n,
                got: self.initial_values.len(),
            });
        }
        if let Some(i) = self.initial_values.iter().position(|v| !v.is_finite()) {
            return Err(ConfigError::NonFiniteValue(i + 1));
        }
        if !(self.epsilon > 0.0) {
            return Err(ConfigError::BadEpsilon);
        }
        if !(self.safety_interval.min <= self.safety_interval.max) {
            return Err(ConfigError::BadInterval);
        }
        let mut seen = BTreeSet::new();
        for (id, _) in &self.attacks {
            if *id == 0 || *id > n {
                return Err(ConfigError::AttackerOutOfRange(*id));
            }
            if !seen.insert(*id) {
                return Err(ConfigError::DuplicateAttacker(*id));
            }
        }
        if self.scheme == Scheme::Scheme1 {
            if !self.graph.is_undirected() {
                return Err(ConfigError::Scheme1NeedsUndirected);
            }
            if self.threat_model == ThreatModel::Local {
                return Err(ConfigError::Scheme1NeedsTotal);
            }
        }
        match self.threat_model {
            ThreatModel::Total if seen.len() > self.f => Err(ConfigError::TooManyAttackers {
                count: seen.len(),
                f: self.f,
            }),
            ThreatModel::Local => {
                for i in self.graph.nodes().filter(|i| !seen.contains(i)) {
                    let count = self.graph.ins(i).intersection(&seen).count();
                    if count > self.f {
                        return Err(ConfigError::LocalBoundExceeded { node: i, count, f: self.f });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Earliest round at which the stop rule may fire, if any attack is
    /// scheduled.
    pub fn min_stop_round(&self) -> Option<usize> {
        self.attacks
            .iter()
            .map(|(_, b)| b.last_scheduled_round() + 1)
            .max()
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunRecord, ConfigError> {
    cfg.validate()?;
    let g = &cfg.graph;
    let n = g.node_count();
    let mut behavior: Vec<Option<&AttackBehavior>> = vec![None; n];
    for (id, b) in &cfg.attacks {
        behavior[id - 1] = Some(b);
    }
    let normal: Vec<bool> = behavior.iter().map(Option::is_none).collect();
    let rule = match cfg.scheme {
        Scheme::Plain => UpdateRule::Plain,
        Scheme::Wmsr => UpdateRule::Wmsr { f: cfg.f },
        _ => UpdateRule::ExcludeFlagged,
    };
    let min_stop = cfg.min_stop_round();
    let mut agents: Vec<AgentState> = cfg
        .initial_values
        .iter()
        .enumerate()
        .map(|(i, &x)| AgentState::new(i + 1, x, cfg.safety_interval))
        .collect();

    let mut values = vec![cfg.initial_values.clone()];
    let mut verdicts: Vec<DetectionVerdict> = Vec::new();
    let mut flag_events: Vec<FlagEvent> = Vec::new();
    let mut first_deviation: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut undecided_votes = 0usize;
    let mut shared: BTreeSet<NodeId> = BTreeSet::new();
    let mut previous: Option<Vec<Broadcast>> = None;
    let mut message_log = cfg.record_messages.then(Vec::new);

    let mut k = 0usize;
    loop {
        let spread = record::spread(&values[k], &normal);
        if spread <= cfg.epsilon && min_stop.is_none_or(|m| k > m) {
            break;
        }
        if k == cfg.max_rounds {
            break;
        }

        let view = OmniscientView {
            graph: g,
            round: k,
            interval: cfg.safety_interval,
            seed: cfg.seed,
        };
        let mut msgs = Vec::with_capacity(n);
        for (idx, agent) in agents.iter_mut().enumerate() {
            let honest = agent.information_set(k);
            let Some(b) = behavior[idx] else {
                msgs.push(Broadcast::Message(honest));
                continue;
            };
            let mut out = apply_attack(b, &honest, &view);
            if cfg.scheme == Scheme::Scheme2 {
                if let Broadcast::Message(m) = &mut out {
                    m.reports.extend(b.fake_reports(k));
                }
            }
            if let Broadcast::Message(m) = &out {
                if m != &honest {
                    first_deviation.entry(idx + 1).or_insert(k);
                }
                agent.value = m.own_value;
                values[k][idx] = m.own_value;
            } else {
                first_deviation.entry(idx + 1).or_insert(k);
            }
            msgs.push(out);
        }

        if cfg.scheme.detects() {
            let detections: Vec<_> = agents
                .iter()
                .map(|a| {
                    let view = a.view(g, k, &msgs);
                    if cfg.scheme == Scheme::Scheme1 {
                        algorithm1_detect(&view)
                    } else {
                        algorithm2_detect(&view)
                    }
                })
                .collect();
            // attackers collude: they never accuse one another
            let detections: Vec<_> = detections
                .into_iter()
                .enumerate()
                .map(|(idx, mut d)| {
                    if !normal[idx] {
                        d.verdicts.retain(|v| normal[v.suspect - 1]);
                    }
                    d
                })
                .collect();
            for (idx, d) in detections.iter().enumerate() {
                if normal[idx] {
                    verdicts.extend(d.verdicts.iter().copied());
                    undecided_votes += d.undecided;
                }
            }
            if cfg.scheme == Scheme::Scheme1 {
                let mut reports = Vec::new();
                for (idx, d) in detections.iter().enumerate() {
                    if msgs[idx].message().is_none() {
                        continue;
                    }
                    let reporter = idx + 1;
                    let mut suspects = d.suspects();
                    if let Some(b) = behavior[idx] {
                        suspects.extend(b.fake_reports(k));
                    }
                    reports.extend(suspects.into_iter().map(|suspect| Report { reporter, suspect }));
                }
                let decision = detection_share_oracle(
                    g,
                    k,
                    &reports,
                    previous.as_deref(),
                    &msgs,
                    &shared,
                    cfg.safety_interval,
                );
                shared.extend(decision.shared.iter().copied());
                for agent in agents.iter_mut() {
                    for suspect in agent.flag(decision.shared.iter().copied()) {
                        flag_events.push(FlagEvent { round: k, node: agent.id, suspect });
                    }
                }
            } else {
                for (agent, d) in agents.iter_mut().zip(&detections) {
                    let own = d.suspects();
                    let mut added = agent.flag(own.iter().copied());
                    agent.pending_reports = own;
                    added.extend(agent.absorb_reports(g, &msgs, cfg.f));
                    for suspect in added {
                        flag_events.push(FlagEvent { round: k, node: agent.id, suspect });
                    }
                }
            }
        }

        for agent in agents.iter_mut() {
            agent.update(g, k, &msgs, rule);
        }
        values.push(agents.iter().map(|a| a.value).collect());
        if let Some(log) = message_log.as_mut() {
            log.push(msgs.clone());
        }
        previous = Some(msgs);
        k += 1;
    }

    let mut rec = RunRecord {
        scheme: cfg.scheme,
        normal,
        values,
        verdicts,
        flag_events,
        first_deviation,
        undecided_votes,
        messages: message_log,
        evaluation: Evaluation::default(),
    };
    rec.evaluation = evaluate(&rec, cfg);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AttackKind;

    fn ramp(n: usize) -> Vec<f64> {
        (0..n).map(|i| 10.0 * i as f64).collect()
    }

    #[test]
    fn plain_converges_on_connected_graph() {
        let cfg = RunConfig::new(DirectedGraph::cycle(6), Scheme::Plain, 0, ramp(6));
        let rec = run(&cfg).unwrap();
        assert_eq!(rec.evaluation.outcome, Outcome::Converged);
        assert!(rec.evaluation.final_spread <= 1e-6);
        assert!(rec.verdicts.is_empty());
    }

    #[test]
    fn validation_errors() {
        let base = RunConfig::new(DirectedGraph::complete(4), Scheme::Scheme1, 1, ramp(4));
        assert!(base.validate().is_ok());
        let mut c = base.clone();
        c.initial_values.pop();
        assert_eq!(c.validate(), Err(ConfigError::InitialValues { expected: 4, got: 3 }));
        let c = base
            .clone()
            .with_attack(1, AttackBehavior::new(AttackKind::Crash))
            .with_attack(2, AttackBehavior::new(AttackKind::Crash));
        assert_eq!(c.validate(), Err(ConfigError::TooManyAttackers { count: 2, f: 1 }));
        let mut c = base.clone();
        c.threat_model = ThreatModel::Local;
        assert_eq!(c.validate(), Err(ConfigError::Scheme1NeedsTotal));
        let mut c = base.clone();
        c.graph = DirectedGraph::directed_cycle(4);
        assert_eq!(c.validate(), Err(ConfigError::Scheme1NeedsUndirected));
        let c = base.clone().with_attack(9, AttackBehavior::new(AttackKind::Crash));
        assert_eq!(c.validate(), Err(ConfigError::AttackerOutOfRange(9)));
        let mut c = base.clone();
        c.epsilon = 0.0;
        assert_eq!(c.validate(), Err(ConfigError::BadEpsilon));
        let mut c = RunConfig::new(DirectedGraph::cycle(5), Scheme::Scheme2, 1, ramp(5));
        c.threat_model = ThreatModel::Local;
        let c = c
            .with_attack(1, AttackBehavior::new(AttackKind::Crash))
            .with_attack(3, AttackBehavior::new(AttackKind::Crash));
        assert_eq!(
            c.validate(),
            Err(ConfigError::LocalBoundExceeded { node: 2, count: 2, f: 1 })
        );
    }

    #[test]
    fn static_attacker_flagged_on_complete_graph() {
        for scheme in [Scheme::Scheme1, Scheme::Scheme2] {
            let cfg = RunConfig::new(DirectedGraph::complete(5), scheme, 3, ramp(5))
                .with_attack(1, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 }))
                .with_attack(2, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 }))
                .with_attack(3, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 }));
            let rec = run(&cfg).unwrap();
            assert_eq!(rec.evaluation.outcome, Outcome::Converged, "{scheme}");
            for a in 1..=3 {
                let s = &rec.evaluation.attackers[&a];
                assert_eq!(s.first_deviation, Some(3));
                assert_eq!(s.network_flag_round, Some(4), "{scheme} attacker {a}");
            }
        }
    }

    #[test]
    fn crash_is_detected_by_silence() {
        let cfg = RunConfig::new(DirectedGraph::complete(4), Scheme::Scheme2, 1, ramp(4))
            .with_attack(4, AttackBehavior::starting(AttackKind::Crash, 2));
        let rec = run(&cfg).unwrap();
        assert_eq!(rec.evaluation.outcome, Outcome::Converged);
        assert!(rec
            .verdicts
            .iter()
            .all(|v| v.suspect == 4 && v.round == 2 && v.reason == crate::protocol::Reason::MissingMessage));
        assert_eq!(rec.evaluation.attackers[&4].network_flag_round, Some(3));
    }

    #[test]
    fn wmsr_trims_extreme_attacker() {
        let cfg = RunConfig::new(DirectedGraph::complete(6), Scheme::Wmsr, 1, ramp(6))
            .with_attack(6, AttackBehavior::new(AttackKind::StaticValue { value: 100.0 }));
        let rec = run(&cfg).unwrap();
        assert_eq!(rec.evaluation.outcome, Outcome::Converged);
        assert!(rec.evaluation.safety_ok);
    }

    #[test]
    fn message_log_is_optional() {
        let mut cfg = RunConfig::new(DirectedGraph::path(3), Scheme::Scheme1, 1, ramp(3));
        assert!(run(&cfg).unwrap().messages.is_none());
        cfg.record_messages = true;
        let rec = run(&cfg).unwrap();
        assert_eq!(rec.messages.as_ref().unwrap().len(), rec.rounds_run());
    }
}
