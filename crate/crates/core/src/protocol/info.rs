use std::collections::{BTreeMap, BTreeSet};

use crate::graph::NodeId;

use super::AgentState;

/// One round's broadcast `Φ_i[k]`.
///
/// From round 1 on, `neighbor_values` is keyed by `N_i ∪ {i}` and holds the
/// own values received in round `k-1`; `None` marks a neighbor that stayed
/// silent. `reports` carries the suspects the sender detected itself in the
/// previous round and is only populated under fully distributed detection.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationSet {
    pub sender: NodeId,
    pub round: usize,
    pub own_value: f64,
    pub neighbor_values: BTreeMap<NodeId, Option<f64>>,
    pub declared_malicious: BTreeSet<NodeId>,
    pub reports: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Broadcast {
    Message(InformationSet),
    Silence,
}

impl Broadcast {
    pub fn message(&self) -> Option<&InformationSet> {
        match self {
            Broadcast::Message(m) => Some(m),
            Broadcast::Silence => None,
        }
    }

    pub fn own_value(&self) -> Option<f64> {
        self.message().map(|m| m.own_value)
    }
}

/// Reference copy of the own values broadcast in round `round`, keyed by
/// `N_i ∪ {i}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckSet {
    pub round: usize,
    pub values: BTreeMap<NodeId, Option<f64>>,
}

pub fn build_information_set(state: &AgentState, round: usize) -> InformationSet {
    let neighbor_values = if round == 0 {
        BTreeMap::new()
    } else {
        state.check_set.values.clone()
    };
    let declared_malicious = if round == 0 {
        BTreeSet::new()
    } else {
        state.malicious_set.clone()
    };
    InformationSet {
        sender: state.id,
        round,
        own_value: state.value,
        neighbor_values,
        declared_malicious,
        reports: state.pending_reports.clone(),
    }
}
