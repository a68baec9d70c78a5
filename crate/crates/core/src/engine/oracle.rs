use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{DirectedGraph, NodeId};
use crate::protocol::{algorithm1_detect, Broadcast, DetectionView, SafetyInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Report {
    pub reporter: NodeId,
    pub suspect: NodeId,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleDecision {
    /// Ids to add to every node's malicious set.
    pub shared: BTreeSet<NodeId>,
    pub rejected: Vec<Report>,
}

/// Trusted verifier for the detection share.
///
/// Rebuilds each reporter's view from the archived broadcasts of rounds
/// `round - 1` and `round` and reruns the detection steps. A report whose
/// suspect the replay also finds is shared; otherwise the reporter is.
/// Reports from nodes already in `known` are ignored.
pub fn detection_share_oracle(
    graph: &DirectedGraph,
    round: usize,
    reports: &[Report],
    previous: Option<&[Broadcast]>,
    current: &[Broadcast],
    known: &BTreeSet<NodeId>,
    interval: SafetyInterval,
) -> OracleDecision {
    let mut by_reporter: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for r in reports.iter().filter(|r| !known.contains(&r.reporter)) {
        by_reporter.entry(r.reporter).or_default().insert(r.suspect);
    }
    let mut decision = OracleDecision::default();
    for (reporter, suspects) in by_reporter {
        let mut check = BTreeMap::new();
        if let (true, Some(prev)) = (round > 0, previous) {
            for &h in graph.ins(reporter).iter().chain(std::iter::once(&reporter)) {
                check.insert(h, prev[h - 1].own_value());
            }
        }
        let view = DetectionView {
            detector: reporter,
            graph,
            round,
            known,
            check: &check,
            messages: current,
            interval,
        };
        let confirmed = algorithm1_detect(&view).suspects();
        for suspect in suspects {
            if confirmed.contains(&suspect) {
                decision.shared.insert(suspect);
            } else {
                decision.shared.insert(reporter);
                decision.rejected.push(Report { reporter, suspect });
            }
        }
    }
    decision
}
