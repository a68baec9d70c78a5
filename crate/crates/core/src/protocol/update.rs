use std::collections::{BTreeMap, BTreeSet};

use crate::graph::NodeId;

/// Sum in key order divided by the count. `None` for an empty input.
///
/// Every party that recomputes an update goes through this function with the
/// same keys, so results agree to the bit.
pub fn mean_ascending<'a>(entries: impl IntoIterator<Item = (&'a NodeId, &'a f64)>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (_, v) in entries {
        sum += *v;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

/// Equal-weight average of `own` and the received values of every neighbor
/// outside `malicious`. Silent neighbors (`None`) are skipped. `own` is
/// summed at position `id`.
pub fn normal_update(
    id: NodeId,
    own: f64,
    neighbor_values: &BTreeMap<NodeId, Option<f64>>,
    malicious: &BTreeSet<NodeId>,
) -> f64 {
    let mut kept: BTreeMap<NodeId, f64> = neighbor_values
        .iter()
        .filter(|(j, _)| **j != id && !malicious.contains(j))
        .filter_map(|(j, v)| v.map(|v| (*j, v)))
        .collect();
    kept.insert(id, own);
    mean_ascending(&kept).unwrap_or(own)
}

/// W-MSR step: drop up to `f` values strictly above `own` (largest first)
/// and up to `f` strictly below (smallest first), then average `own` with
/// the rest. Ties at the cut are broken by node id.
pub fn wmsr_update(own: f64, neighbor_values: &BTreeMap<NodeId, f64>, f: usize) -> f64 {
    let mut above: Vec<(NodeId, f64)> = Vec::new();
    let mut below: Vec<(NodeId, f64)> = Vec::new();
    let mut kept: BTreeMap<NodeId, f64> = BTreeMap::new();
    for (&j, &v) in neighbor_values {
        if v > own {
            above.push((j, v));
        } else if v < own {
            below.push((j, v));
        } else {
            kept.insert(j, v);
        }
    }
    above.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    below.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    kept.extend(above.into_iter().skip(f));
    kept.extend(below.into_iter().skip(f));
    let sum = kept.values().fold(own, |acc, v| acc + v);
    sum / (kept.len() + 1) as f64
}
