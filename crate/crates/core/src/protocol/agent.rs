use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{DirectedGraph, NodeId};

use super::detect::DetectionView;
use super::info::{build_information_set, Broadcast, CheckSet, InformationSet};
use super::update::{normal_update, wmsr_update};
use super::vote::threshold_reports;
use super::SafetyInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    /// Average over `{i} ∪ (N_i \ A_i)`.
    ExcludeFlagged,
    /// Average over every non-silent in-neighbor.
    Plain,
    Wmsr { f: usize },
}

/// Runtime state of one agent.
///
/// Messages are not copied into a per-agent inbox: the engine hands every
/// agent the round's broadcast table and the agent reads only the entries of
/// its in-neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub id: NodeId,
    pub value: f64,
    pub check_set: CheckSet,
    pub malicious_set: BTreeSet<NodeId>,
    /// Distinct in-neighbors that reported each suspect, accumulated.
    pub reporters: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// Own detections of the current round, attached to the next message.
    pub pending_reports: BTreeSet<NodeId>,
    pub safety_interval: SafetyInterval,
}

impl AgentState {
    pub fn new(id: NodeId, initial: f64, safety_interval: SafetyInterval) -> Self {
        Self {
            id,
            value: initial,
            check_set: CheckSet::default(),
            malicious_set: BTreeSet::new(),
            reporters: BTreeMap::new(),
            pending_reports: BTreeSet::new(),
            safety_interval,
        }
    }

    pub fn information_set(&self, round: usize) -> InformationSet {
        build_information_set(self, round)
    }

    pub fn view<'a>(
        &'a self,
        graph: &'a DirectedGraph,
        round: usize,
        messages: &'a [Broadcast],
    ) -> DetectionView<'a> {
        DetectionView {
            detector: self.id,
            graph,
            round,
            known: &self.malicious_set,
            check: &self.check_set.values,
            messages,
            interval: self.safety_interval,
        }
    }

    /// Adds suspects to the malicious set and returns the new ones in order.
    pub fn flag(&mut self, suspects: impl IntoIterator<Item = NodeId>) -> Vec<NodeId> {
        let mut added = Vec::new();
        for s in suspects {
            if s != self.id && self.malicious_set.insert(s) {
                added.push(s);
            }
        }
        added
    }

    /// Records the reports carried by in-neighbors' messages and flags every
    /// suspect that has reached `f + 1` distinct reporters.
    pub fn absorb_reports(
        &mut self,
        graph: &DirectedGraph,
        messages: &[Broadcast],
        f: usize,
    ) -> Vec<NodeId> {
        for &j in graph.ins(self.id) {
            if let Some(m) = messages[j - 1].message() {
                for &s in &m.reports {
                    if s != self.id {
                        self.reporters.entry(s).or_default().insert(j);
                    }
                }
            }
        }
        let ready = threshold_reports(&self.reporters, f);
        self.flag(ready)
    }

    /// Moves to the next round: computes the new value from this round's
    /// own values and stores them (plus the current value) as the check set.
    pub fn update(
        &mut self,
        graph: &DirectedGraph,
        round: usize,
        messages: &[Broadcast],
        rule: UpdateRule,
    ) {
        let mut received: BTreeMap<NodeId, Option<f64>> = graph
            .ins(self.id)
            .iter()
            .map(|&j| (j, messages[j - 1].own_value()))
            .collect();
        let next = match rule {
            UpdateRule::ExcludeFlagged => {
                normal_update(self.id, self.value, &received, &self.malicious_set)
            }
            UpdateRule::Plain => normal_update(self.id, self.value, &received, &BTreeSet::new()),
            UpdateRule::Wmsr { f } => {
                let present: BTreeMap<NodeId, f64> =
                    received.iter().filter_map(|(&j, v)| v.map(|v| (j, v))).collect();
                wmsr_update(self.value, &present, f)
            }
        };
        received.insert(self.id, Some(self.value));
        self.check_set = CheckSet {
            round,
            values: received,
        };
        self.value = next;
    }
}
