use std::collections::{BTreeMap, BTreeSet};

use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Vote<T> {
    Decided(T),
    Undecided,
}

impl<T> Vote<T> {
    pub fn decided(self) -> Option<T> {
        match self {
            Vote::Decided(v) => Some(v),
            Vote::Undecided => None,
        }
    }
}

/// Strict majority under exact equality: some value held by more than
/// half of the entries, otherwise `Undecided`. Empty input is undecided.
pub fn majority_vote<T: PartialEq + Clone>(values: &[T]) -> Vote<T> {
    // Boyer-Moore candidate, then a counting pass
    let mut candidate: Option<&T> = None;
    let mut weight = 0usize;
    for v in values {
        match candidate {
            Some(c) if c == v => weight += 1,
            _ if weight == 0 => {
                candidate = Some(v);
                weight = 1;
            }
            _ => weight -= 1,
        }
    }
    match candidate {
        Some(c) if 2 * values.iter().filter(|v| *v == c).count() > values.len() => {
            Vote::Decided(c.clone())
        }
        _ => Vote::Undecided,
    }
}

pub fn algorithm2_majority_vote(values: &[f64]) -> Vote<f64> {
    majority_vote(values)
}

/// Suspects with at least `f + 1` distinct reporters.
pub fn threshold_reports(
    reporters: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    f: usize,
) -> BTreeSet<NodeId> {
    reporters
        .iter()
        .filter(|(_, who)| who.len() > f)
        .map(|(&s, _)| s)
        .collect()
}
