//! Per-neighbor consistency checks run by an honest agent on the messages of
//! one round.
//!
//! Both algorithms share the step sequence; they differ in where the
//! reference labels and reference values for nodes outside `N_i ∪ {i}` come
//! from. With detection share every honest agent holds the same malicious
//! set, so declared sets are compared whole and relayed values are checked
//! only where the detector holds its own copy. With voting, two-hop
//! references are the strict-majority copy among unflagged relayers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::graph::{DirectedGraph, NodeId};

use super::update::mean_ascending;
use super::vote::majority_vote;
use super::{Broadcast, InformationSet, SafetyInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    BadIdentityClaim,
    BadNeighborIds,
    RelayedValueMismatch,
    UpdateRuleViolation,
    OutOfSafetyInterval,
    MissingMessage,
}

impl Reason {
    pub const ALL: [Reason; 6] = [
        Reason::BadIdentityClaim,
        Reason::BadNeighborIds,
        Reason::RelayedValueMismatch,
        Reason::UpdateRuleViolation,
        Reason::OutOfSafetyInterval,
        Reason::MissingMessage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Reason::BadIdentityClaim => "bad-identity-claim",
            Reason::BadNeighborIds => "bad-neighbor-ids",
            Reason::RelayedValueMismatch => "relayed-value-mismatch",
            Reason::UpdateRuleViolation => "update-rule-violation",
            Reason::OutOfSafetyInterval => "out-of-safety-interval",
            Reason::MissingMessage => "missing-message",
        }
    }

    pub fn parse(s: &str) -> Option<Reason> {
        Reason::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DetectionVerdict {
    pub detector: NodeId,
    pub suspect: NodeId,
    pub round: usize,
    pub reason: Reason,
}

/// Everything a detector may look at in one round.
#[derive(Debug, Clone, Copy)]
pub struct DetectionView<'a> {
    pub detector: NodeId,
    pub graph: &'a DirectedGraph,
    pub round: usize,
    /// Malicious set at the start of the round.
    pub known: &'a BTreeSet<NodeId>,
    /// Own values of `N_i ∪ {i}` from the previous round.
    pub check: &'a BTreeMap<NodeId, Option<f64>>,
    /// This round's broadcasts indexed by `sender - 1`. Only entries of
    /// in-neighbors are read.
    pub messages: &'a [Broadcast],
    pub interval: SafetyInterval,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Detection {
    pub verdicts: Vec<DetectionVerdict>,
    /// Distinct two-hop references (labels or values) the vote could not fix.
    pub undecided: usize,
}

impl Detection {
    pub fn suspects(&self) -> BTreeSet<NodeId> {
        self.verdicts.iter().map(|v| v.suspect).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Shared,
    Voting,
}

/// Detection against the network-wide shared malicious set.
pub fn algorithm1_detect(view: &DetectionView<'_>) -> Detection {
    Checker::new(view, Mode::Shared).run()
}

/// Fully distributed detection with majority-voted two-hop references.
pub fn algorithm2_detect(view: &DetectionView<'_>) -> Detection {
    Checker::new(view, Mode::Voting).run()
}

/// Per-detector scratch state. Lookups are dense vectors indexed by node id.
struct Checker<'v, 'a> {
    view: &'v DetectionView<'a>,
    mode: Mode,
    in_detector: Vec<bool>,
    known: Vec<bool>,
    check: Vec<Option<Option<f64>>>,
    labels: Vec<Option<Option<bool>>>,
    values: Vec<Option<Option<Option<f64>>>>,
    /// Relayer lists of every `h`, flattened: `flat[start[h]..start[h+1]]`.
    /// Built on the first vote.
    relayers: Option<(Vec<usize>, Vec<&'a InformationSet>)>,
    undecided: usize,
}

impl<'v, 'a> Checker<'v, 'a> {
    fn new(view: &'v DetectionView<'a>, mode: Mode) -> Self {
        let n = view.graph.node_count();
        let mut in_detector = vec![false; n + 1];
        for &j in view.graph.ins(view.detector) {
            in_detector[j] = true;
        }
        let mut known = vec![false; n + 1];
        for &j in view.known.iter().filter(|&&j| j <= n) {
            known[j] = true;
        }
        let mut check = vec![None; n + 1];
        for (&h, &x) in view.check.iter().filter(|(&h, _)| h <= n) {
            check[h] = Some(x);
        }
        Self {
            view,
            mode,
            in_detector,
            known,
            check,
            labels: vec![None; n + 1],
            values: vec![None; n + 1],
            relayers: None,
            undecided: 0,
        }
    }

    fn run(mut self) -> Detection {
        let v = self.view;
        let mut verdicts = Vec::new();
        for &j in v.graph.ins(v.detector) {
            if self.known[j] {
                continue;
            }
            let reason = match v.messages[j - 1].message() {
                None => Some(Reason::MissingMessage),
                Some(m) => self.check(j, m),
            };
            if let Some(reason) = reason {
                verdicts.push(DetectionVerdict {
                    detector: v.detector,
                    suspect: j,
                    round: v.round,
                    reason,
                });
            }
        }
        Detection {
            verdicts,
            undecided: self.undecided,
        }
    }

    fn check(&mut self, j: NodeId, m: &InformationSet) -> Option<Reason> {
        let v = self.view;
        if m.sender != j || m.round != v.round {
            return Some(Reason::BadNeighborIds);
        }
        if !self.identities_consistent(j, m) {
            return Some(Reason::BadIdentityClaim);
        }
        let nj = v.graph.ins(j);
        let keys_ok = if v.round == 0 {
            m.neighbor_values.is_empty()
        } else {
            // keys must be exactly N_j ∪ {j}, both sides ascending
            let expected = nj.range(..j).chain(std::iter::once(&j)).chain(nj.range(j + 1..));
            m.neighbor_values.len() == nj.len() + 1 && m.neighbor_values.keys().eq(expected)
        };
        if !keys_ok {
            return Some(Reason::BadNeighborIds);
        }
        if v.round == 0 {
            return (!v.interval.contains(m.own_value)).then_some(Reason::OutOfSafetyInterval);
        }
        for (&h, &relayed) in &m.neighbor_values {
            if let Some(reference) = self.reference_value(h) {
                if reference != relayed {
                    return Some(Reason::RelayedValueMismatch);
                }
            }
        }
        let mut used: Vec<(&NodeId, &f64)> = Vec::with_capacity(m.neighbor_values.len());
        for (h, relayed) in &m.neighbor_values {
            if *h == j || !m.declared_malicious.contains(h) {
                match relayed {
                    Some(x) => used.push((h, x)),
                    None => return Some(Reason::UpdateRuleViolation),
                }
            }
        }
        (mean_ascending(used) != Some(m.own_value)).then_some(Reason::UpdateRuleViolation)
    }

    fn identities_consistent(&mut self, j: NodeId, m: &InformationSet) -> bool {
        let v = self.view;
        match self.mode {
            Mode::Shared => m.declared_malicious == *v.known,
            Mode::Voting => {
                let i = v.detector;
                for &h in v.graph.ins(j) {
                    let reference = if h == i {
                        Some(false)
                    } else if self.in_detector[h] {
                        Some(self.known[h])
                    } else {
                        self.voted_label(h)
                    };
                    if let Some(r) = reference {
                        if r != m.declared_malicious.contains(&h) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    fn reference_value(&mut self, h: NodeId) -> Option<Option<f64>> {
        let v = self.view;
        if h == v.detector || self.in_detector[h] {
            return self.check[h];
        }
        match self.mode {
            Mode::Shared => None,
            Mode::Voting => self.voted_value(h),
        }
    }

    /// Unflagged, non-silent in-neighbors whose topological in-neighborhood
    /// contains `h`, in ascending id order.
    fn relayers(&mut self, h: NodeId) -> &[&'a InformationSet] {
        let v = self.view;
        let known = &self.known;
        let (start, flat) = self.relayers.get_or_insert_with(|| {
            let n = v.graph.node_count();
            let sources: Vec<(NodeId, &'a InformationSet)> = v
                .graph
                .ins(v.detector)
                .iter()
                .filter(|&&l| !known[l])
                .filter_map(|&l| v.messages[l - 1].message().map(|m| (l, m)))
                .collect();
            let mut start = vec![0usize; n + 2];
            for &(l, _) in &sources {
                for &h in v.graph.ins(l) {
                    start[h + 1] += 1;
                }
            }
            for x in 1..start.len() {
                start[x] += start[x - 1];
            }
            let mut fill = start.clone();
            let mut slots = vec![0usize; start[n + 1]];
            for (k, &(l, _)) in sources.iter().enumerate() {
                for &h in v.graph.ins(l) {
                    slots[fill[h]] = k;
                    fill[h] += 1;
                }
            }
            (start, slots.into_iter().map(|k| sources[k].1).collect())
        });
        &flat[start[h]..start[h + 1]]
    }

    fn voted_label(&mut self, h: NodeId) -> Option<bool> {
        if let Some(cached) = self.labels[h] {
            return cached;
        }
        let labels: Vec<bool> = self
            .relayers(h)
            .iter()
            .map(|m| m.declared_malicious.contains(&h))
            .collect();
        let out = majority_vote(&labels).decided();
        if out.is_none() {
            self.undecided += 1;
        }
        self.labels[h] = Some(out);
        out
    }

    fn voted_value(&mut self, h: NodeId) -> Option<Option<f64>> {
        if let Some(cached) = self.values[h] {
            return cached;
        }
        let copies: Vec<Option<f64>> = self
            .relayers(h)
            .iter()
            .filter_map(|m| m.neighbor_values.get(&h).copied())
            .collect();
        let out = majority_vote(&copies).decided();
        if out.is_none() {
            self.undecided += 1;
        }
        self.values[h] = Some(out);
        out
    }
}
