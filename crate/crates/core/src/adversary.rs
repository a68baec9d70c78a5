//! Scripted malicious behaviors.
//!
//! An attacker runs an honest agent internally and rewrites that agent's
//! information set just before broadcast. The result is a single
//! [`Broadcast`] handed to every out-neighbor alike.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{DirectedGraph, NodeId};
use crate::protocol::{normal_update, Broadcast, InformationSet, SafetyInterval};

pub const DEFAULT_ACTIVATION: usize = 3;
pub const DEFAULT_TAMPER_OFFSET: f64 = 50.0;

/// Field overrides for one round of a scripted attacker. Ids need not be
/// neighbors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScriptedOverride {
    pub own_value: Option<f64>,
    pub set_values: BTreeMap<NodeId, Option<f64>>,
    pub remove_values: BTreeSet<NodeId>,
    pub declared: Option<BTreeSet<NodeId>>,
    pub silent: bool,
    /// Detection claims filed this round: through the share under Scheme 1,
    /// attached to the message under Scheme 2.
    pub fake_reports: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttackKind {
    HonestShadow,
    StaticValue { value: f64 },
    /// Overwrites the relayed value of one neighbor; `None` picks the victim
    /// from the in-neighbors with the run seed, once per run.
    RelayTamper { victim: Option<NodeId>, offset: f64 },
    CollusionPair { partner: NodeId, offset: f64 },
    Crash,
    /// Per-round overrides. Ignores the activation round.
    Scripted { script: BTreeMap<usize, ScriptedOverride> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackBehavior {
    pub kind: AttackKind,
    pub activation: usize,
}

impl AttackBehavior {
    pub fn new(kind: AttackKind) -> Self {
        Self {
            kind,
            activation: DEFAULT_ACTIVATION,
        }
    }

    pub fn starting(kind: AttackKind, activation: usize) -> Self {
        Self { kind, activation }
    }

    pub fn is_active(&self, round: usize) -> bool {
        matches!(self.kind, AttackKind::Scripted { .. }) || round >= self.activation
    }

    /// Last round at which the behavior changes: the activation round, or the
    /// last scripted round.
    pub fn last_scheduled_round(&self) -> usize {
        match &self.kind {
            AttackKind::Scripted { script } => script.keys().next_back().copied().unwrap_or(0),
            _ => self.activation,
        }
    }

    pub fn fake_reports(&self, round: usize) -> BTreeSet<NodeId> {
        match &self.kind {
            AttackKind::Scripted { script } => script
                .get(&round)
                .map(|o| o.fake_reports.clone())
                .unwrap_or_default(),
            _ => BTreeSet::new(),
        }
    }
}

/// What an attacker may consult beyond its own honest message.
#[derive(Debug, Clone, Copy)]
pub struct OmniscientView<'a> {
    pub graph: &'a DirectedGraph,
    pub round: usize,
    pub interval: SafetyInterval,
    pub seed: u64,
}

/// Victim of a relay-tamper attacker with no fixed victim.
pub fn resolve_victim(graph: &DirectedGraph, attacker: NodeId, seed: u64) -> Option<NodeId> {
    let candidates: Vec<NodeId> = graph.ins(attacker).iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, attacker as u64));
    candidates.choose(&mut rng).copied()
}

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `true + offset` clamped to the interval, or `true - offset` clamped when
/// the first choice collapses onto the true value.
pub fn tampered(value: f64, offset: f64, interval: SafetyInterval) -> f64 {
    let up = interval.clamp(value + offset);
    if up != value {
        up
    } else {
        interval.clamp(value - offset)
    }
}

pub fn apply_attack(
    behavior: &AttackBehavior,
    honest: &InformationSet,
    view: &OmniscientView<'_>,
) -> Broadcast {
    if !behavior.is_active(view.round) {
        return Broadcast::Message(honest.clone());
    }
    let mut m = honest.clone();
    match &behavior.kind {
        AttackKind::HonestShadow => {}
        AttackKind::StaticValue { value } => m.own_value = *value,
        AttackKind::Crash => return Broadcast::Silence,
        AttackKind::RelayTamper { victim, offset } => {
            let victim = victim.or_else(|| resolve_victim(view.graph, m.sender, view.seed));
            if let Some(v) = victim {
                tamper_entry(&mut m, v, *offset, view.interval);
            }
        }
        AttackKind::CollusionPair { partner, offset } => {
            tamper_entry(&mut m, *partner, *offset, view.interval);
        }
        AttackKind::Scripted { script } => {
            let Some(o) = script.get(&view.round) else {
                return Broadcast::Message(m);
            };
            if o.silent {
                return Broadcast::Silence;
            }
            for h in &o.remove_values {
                m.neighbor_values.remove(h);
            }
            m.neighbor_values.extend(o.set_values.iter().map(|(h, v)| (*h, *v)));
            if let Some(d) = &o.declared {
                m.declared_malicious = d.clone();
            }
            if let Some(x) = o.own_value {
                m.own_value = x;
            }
        }
    }
    Broadcast::Message(m)
}

/// Rewrites the relayed value of `victim` (if present and known) and makes
/// the own value consistent with the rewritten data.
fn tamper_entry(m: &mut InformationSet, victim: NodeId, offset: f64, interval: SafetyInterval) {
    let Some(Some(x)) = m.neighbor_values.get(&victim).copied() else {
        return;
    };
    m.neighbor_values.insert(victim, Some(tampered(x, offset, interval)));
    if let Some(Some(prev)) = m.neighbor_values.get(&m.sender).copied() {
        m.own_value = normal_update(m.sender, prev, &m.neighbor_values, &m.declared_malicious);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn honest(round: usize) -> InformationSet {
        InformationSet {
            sender: 1,
            round,
            own_value: 4.0,
            neighbor_values: BTreeMap::from([(1, Some(2.0)), (2, Some(4.0)), (3, Some(6.0))]),
            declared_malicious: BTreeSet::new(),
            reports: BTreeSet::new(),
        }
    }

    fn view(g: &DirectedGraph, round: usize) -> OmniscientView<'_> {
        OmniscientView {
            graph: g,
            round,
            interval: SafetyInterval::default(),
            seed: 11,
        }
    }

    fn msg(b: Broadcast) -> InformationSet {
        b.message().cloned().expect("message")
    }

    #[test]
    fn static_value_from_activation() {
        let g = DirectedGraph::complete(3);
        let b = AttackBehavior::new(AttackKind::StaticValue { value: 120.0 });
        assert_eq!(msg(apply_attack(&b, &honest(2), &view(&g, 2))), honest(2));
        assert_eq!(msg(apply_attack(&b, &honest(3), &view(&g, 3))).own_value, 120.0);
    }

    #[test]
    fn honest_shadow_is_identity() {
        let g = DirectedGraph::complete(3);
        let b = AttackBehavior::starting(AttackKind::HonestShadow, 0);
        for k in 0..5 {
            assert_eq!(msg(apply_attack(&b, &honest(k), &view(&g, k))), honest(k));
        }
    }

    #[test]
    fn crash_goes_silent() {
        let g = DirectedGraph::complete(3);
        let b = AttackBehavior::starting(AttackKind::Crash, 1);
        assert!(apply_attack(&b, &honest(0), &view(&g, 0)).message().is_some());
        assert_eq!(apply_attack(&b, &honest(1), &view(&g, 1)), Broadcast::Silence);
    }

    #[test]
    fn relay_tamper_keeps_update_consistent() {
        let g = DirectedGraph::complete(3);
        let b = AttackBehavior::starting(
            AttackKind::RelayTamper { victim: Some(3), offset: 50.0 },
            0,
        );
        let m = msg(apply_attack(&b, &honest(4), &view(&g, 4)));
        assert_eq!(m.neighbor_values[&3], Some(56.0));
        assert_eq!(m.own_value, (2.0 + 4.0 + 56.0) / 3.0);
    }

    #[test]
    fn tamper_clamps_and_flips() {
        let iv = SafetyInterval::default();
        assert_eq!(tampered(10.0, 50.0, iv), 60.0);
        assert_eq!(tampered(80.0, 50.0, iv), 100.0);
        assert_eq!(tampered(100.0, 50.0, iv), 50.0);
    }

    #[test]
    fn victim_choice_is_per_run_and_seeded() {
        let g = DirectedGraph::complete(8);
        let v = resolve_victim(&g, 3, 5).unwrap();
        assert_ne!(v, 3);
        assert_eq!(resolve_victim(&g, 3, 5), Some(v));
        let picks: BTreeSet<NodeId> = (0..40).filter_map(|s| resolve_victim(&g, 3, s)).collect();
        assert!(picks.len() > 1);
        assert_eq!(resolve_victim(&DirectedGraph::new(2, true), 1, 0), None);
    }

    #[test]
    fn scripted_overrides() {
        let g = DirectedGraph::complete(3);
        let mut script = BTreeMap::new();
        script.insert(
            1,
            ScriptedOverride {
                own_value: Some(9.0),
                set_values: BTreeMap::from([(7, Some(1.0))]),
                remove_values: BTreeSet::from([2]),
                declared: Some(BTreeSet::from([3])),
                ..Default::default()
            },
        );
        script.insert(2, ScriptedOverride { silent: true, ..Default::default() });
        let b = AttackBehavior::new(AttackKind::Scripted { script });
        assert!(b.is_active(0));
        assert_eq!(b.last_scheduled_round(), 2);
        assert_eq!(msg(apply_attack(&b, &honest(0), &view(&g, 0))), honest(0));
        let m = msg(apply_attack(&b, &honest(1), &view(&g, 1)));
        assert_eq!(m.own_value, 9.0);
        assert_eq!(m.neighbor_values.keys().copied().collect::<Vec<_>>(), vec![1, 3, 7]);
        assert_eq!(m.declared_malicious, BTreeSet::from([3]));
        assert_eq!(apply_attack(&b, &honest(2), &view(&g, 2)), Broadcast::Silence);
    }
}
