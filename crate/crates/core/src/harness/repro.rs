//! Canned scenarios with golden assertions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::adversary::{AttackBehavior, AttackKind, DEFAULT_TAMPER_OFFSET};
use crate::engine::{fmt_sig, run, Outcome, RunConfig, RunRecord, Scheme, ThreatModel};
use crate::graph::{DirectedGraph, NodeId};

use super::HarnessError;

pub const SCENARIOS: [&str; 4] = ["phi2-example", "k9-minus5-scheme2", "collusion-4cycle", "complete-fmax"];

/// Initial state shared by the 9-node scenarios.
pub const NINE_NODE_START: [f64; 9] = [8.0, 10.0, 4.0, 2.0, 1.0, 5.0, 9.0, 3.0, 6.0];

/// 4-connected 9-node graph in which every adjacent pair has at least two
/// common neighbors, and node 2's neighbors are 1, 3, 7 and 9.
pub const NINE_NODE_EDGES: [(NodeId, NodeId); 22] = [
    (1, 2),
    (1, 3),
    (1, 6),
    (1, 7),
    (1, 9),
    (2, 3),
    (2, 7),
    (2, 9),
    (3, 5),
    (3, 6),
    (3, 8),
    (3, 9),
    (4, 5),
    (4, 6),
    (4, 7),
    (4, 8),
    (4, 9),
    (5, 6),
    (5, 8),
    (6, 7),
    (7, 9),
    (8, 9),
];

/// In-edges of node 1 removed from `K_9`.
pub const K9_REMOVED_IN_EDGES: [(NodeId, NodeId); 5] = [(2, 1), (3, 1), (5, 1), (6, 1), (7, 1)];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ReproReport {
    pub name: &'static str,
    pub config: RunConfig,
    pub record: RunRecord,
    pub checks: Vec<Check>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let ev = &self.record.evaluation;
        let _ = writeln!(s, "scenario {}", self.name);
        let _ = writeln!(
            s,
            "scheme {} f {} rounds {} outcome {} spread {}",
            self.config.scheme,
            self.config.f,
            self.record.rounds_run(),
            ev.outcome.as_str(),
            fmt_sig(ev.final_spread)
        );
        for (a, sm) in &ev.attackers {
            let _ = writeln!(
                s,
                "attacker {a}: deviation {} first verdict {} flagged by all at {}",
                opt(sm.first_deviation),
                opt(sm.first_verdict),
                opt(sm.network_flag_round)
            );
        }
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        s
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn nine_node_graph() -> DirectedGraph {
    DirectedGraph::from_edges(9, true, NINE_NODE_EDGES).expect("static edge list")
}

pub fn k9_minus5() -> DirectedGraph {
    let mut g = DirectedGraph::complete(9).into_directed();
    for (u, v) in K9_REMOVED_IN_EDGES {
        g.remove_edge(u, v).expect("static edge list");
    }
    g
}

pub fn repro_scenario(name: &str) -> Result<ReproReport, HarnessError> {
    match name {
        "phi2-example" => phi2_example(),
        "k9-minus5-scheme2" => k9_minus5_scheme2(),
        "collusion-4cycle" => collusion_4cycle(),
        "complete-fmax" => complete_fmax(),
        other => Err(HarnessError::UnknownScenario(other.into())),
    }
}

fn finish(name: &'static str, config: RunConfig, checks: impl FnOnce(&RunConfig, &RunRecord) -> Vec<Check>) -> Result<ReproReport, HarnessError> {
    let record = run(&config)?;
    let checks = checks(&config, &record);
    Ok(ReproReport {
        name,
        config,
        record,
        checks,
    })
}

fn phi2_example() -> Result<ReproReport, HarnessError> {
    let mut cfg = RunConfig::new(nine_node_graph(), Scheme::Scheme1, 3, NINE_NODE_START.to_vec());
    cfg.record_messages = true;
    finish("phi2-example", cfg, |_, rec| {
        let x = rec.values[1][1];
        let mut checks = vec![check("x_2[1] = 7.4", x == 7.4, format!("got {x}"))];
        let msg = rec
            .messages
            .as_ref()
            .and_then(|m| m.get(1))
            .and_then(|r| r[1].message());
        let expected: BTreeMap<NodeId, Option<f64>> =
            [(1, 8.0), (2, 10.0), (3, 4.0), (7, 9.0), (9, 6.0)].into_iter().map(|(h, v)| (h, Some(v))).collect();
        checks.push(match msg {
            Some(m) => check(
                "Phi_2[1]",
                m.sender == 2 && m.round == 1 && m.own_value == 7.4 && m.neighbor_values == expected
                    && m.declared_malicious.is_empty(),
                format!(
                    "own {} neighbors {:?} declared {:?}",
                    m.own_value, m.neighbor_values, m.declared_malicious
                ),
            ),
            None => check("Phi_2[1]", false, "no round-1 message from node 2"),
        });
        checks.push(check("no verdicts", rec.verdicts.is_empty(), format!("{} verdicts", rec.verdicts.len())));
        checks.push(check(
            "converged",
            rec.evaluation.outcome == Outcome::Converged,
            rec.evaluation.outcome.as_str(),
        ));
        checks
    })
}

fn k9_minus5_scheme2() -> Result<ReproReport, HarnessError> {
    let mut cfg = RunConfig::new(k9_minus5(), Scheme::Scheme2, 1, NINE_NODE_START.to_vec());
    cfg.threat_model = ThreatModel::Unchecked;
    for a in 2..=7 {
        cfg.attacks.push((a, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 })));
    }
    finish("k9-minus5-scheme2", cfg, |cfg, rec| {
        let mut checks = Vec::new();
        let on = cfg.attacks[0].1.activation;
        let first_flag = |node: NodeId, suspect: NodeId| {
            rec.flag_events
                .iter()
                .filter(|e| e.node == node && e.suspect == suspect)
                .map(|e| e.round)
                .min()
        };
        let mut direct_ok = true;
        let mut late = Vec::new();
        for (a, _) in &cfg.attacks {
            for &i in cfg.graph.outs(*a) {
                if rec.is_normal(i) && first_flag(i, *a) != Some(on) {
                    direct_ok = false;
                    late.push((i, *a, first_flag(i, *a)));
                }
            }
        }
        checks.push(check(
            "out-neighbors flag in the activation round",
            direct_ok,
            if late.is_empty() { "all".to_string() } else { format!("late {late:?}") },
        ));
        let node1: Vec<Option<usize>> = (2..=7).map(|a| first_flag(1, a)).collect();
        checks.push(check(
            "node 1 flags every attacker by the next round",
            node1.iter().all(|r| r.is_some_and(|r| r <= on + 1)),
            format!("{node1:?}"),
        ));
        let nfr: Vec<Option<usize>> = rec.evaluation.attackers.values().map(|s| s.network_flag_round).collect();
        checks.push(check(
            "all attackers isolated within two rounds of activation",
            nfr.iter().all(|r| r.is_some_and(|r| r <= on + 2)),
            format!("{nfr:?}"),
        ));
        let normal_verdicts = rec.verdicts.iter().filter(|v| rec.is_normal(v.suspect)).count();
        checks.push(check("no normal node accused", normal_verdicts == 0, format!("{normal_verdicts}")));
        checks.push(check(
            "normal nodes converge safely",
            rec.evaluation.outcome == Outcome::Converged && rec.evaluation.safety_ok,
            rec.evaluation.outcome.as_str(),
        ));
        checks
    })
}

fn collusion_4cycle() -> Result<ReproReport, HarnessError> {
    let mut cfg = RunConfig::new(DirectedGraph::cycle(4), Scheme::Scheme1, 2, vec![8.0, 10.0, 4.0, 2.0]);
    cfg.max_rounds = 60;
    cfg.attacks.push((
        1,
        AttackBehavior::new(AttackKind::CollusionPair {
            partner: 2,
            offset: DEFAULT_TAMPER_OFFSET,
        }),
    ));
    cfg.attacks.push((
        2,
        AttackBehavior::new(AttackKind::CollusionPair {
            partner: 1,
            offset: DEFAULT_TAMPER_OFFSET,
        }),
    ));
    finish("collusion-4cycle", cfg, |_, rec| {
        let deviated: BTreeSet<NodeId> = rec.first_deviation.keys().copied().collect();
        vec![
            check(
                "attackers deviate",
                deviated == BTreeSet::from([1, 2]),
                format!("{:?}", rec.first_deviation),
            ),
            check("zero verdicts", rec.verdicts.is_empty(), format!("{} verdicts", rec.verdicts.len())),
            check(
                "no flags",
                rec.flag_events.is_empty(),
                format!("{} flag events", rec.flag_events.len()),
            ),
        ]
    })
}

fn complete_fmax() -> Result<ReproReport, HarnessError> {
    let n = 5;
    let f = n - 2;
    let mut cfg = RunConfig::new(DirectedGraph::complete(n), Scheme::Scheme1, f, vec![8.0, 10.0, 4.0, 2.0, 1.0]);
    for a in n - f + 1..=n {
        cfg.attacks.push((a, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 })));
    }
    finish("complete-fmax", cfg, |cfg, rec| {
        let on = cfg.attacks[0].1.activation;
        let nfr: Vec<Option<usize>> = rec.evaluation.attackers.values().map(|s| s.network_flag_round).collect();
        vec![
            check(
                "attackers isolated one round after activation",
                nfr.iter().all(|r| *r == Some(on + 1)),
                format!("{nfr:?}"),
            ),
            check(
                "converged",
                rec.evaluation.outcome == Outcome::Converged,
                rec.evaluation.outcome.as_str(),
            ),
            check("safety", rec.evaluation.safety_ok, format!("{} violations", rec.evaluation.safety_violations)),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_connectivity;

    #[test]
    fn nine_node_graph_matches_its_description() {
        let g = nine_node_graph();
        assert_eq!(vertex_connectivity(&g).unwrap(), 4);
        assert_eq!(g.min_adjacent_two_hop(), Some(2));
        assert_eq!(g.ins(2).iter().copied().collect::<Vec<_>>(), vec![1, 3, 7, 9]);
    }

    #[test]
    fn k9_minus5_shape() {
        let g = k9_minus5();
        assert_eq!(g.ins(1).iter().copied().collect::<Vec<_>>(), vec![4, 8, 9]);
        assert_eq!(g.outs(1).len(), 8);
        assert!(g.check_scheme2_condition(1).holds());
    }

    #[test]
    fn every_scenario_passes() {
        for name in SCENARIOS {
            let r = repro_scenario(name).unwrap();
            assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(repro_scenario("nope"), Err(HarnessError::UnknownScenario(_))));
    }
}
