use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::graph::NodeId;
use crate::protocol::{Broadcast, DetectionVerdict};

use super::{RunConfig, Scheme};

pub const TRACE_HEADER: &str = "# twohop-trace v1";
const MESSAGE_HEADER: &str = "# twohop-messages v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlagEvent {
    /// Round during which `suspect` entered `node`'s malicious set.
    pub round: usize,
    pub node: NodeId,
    pub suspect: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Outcome {
    Converged,
    #[default]
    Diverged,
    SafetyViolated,
    ConditionViolated,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Converged => "converged",
            Outcome::Diverged => "diverged",
            Outcome::SafetyViolated => "safety-violated",
            Outcome::ConditionViolated => "condition-violated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AttackerSummary {
    pub first_deviation: Option<usize>,
    pub first_verdict: Option<usize>,
    /// First round at whose start every normal node holds the attacker in
    /// its malicious set.
    pub network_flag_round: Option<usize>,
    pub latency: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Evaluation {
    pub outcome: Outcome,
    /// `S`: span of the admissible round-0 values.
    pub safety_set: (f64, f64),
    pub safety_ok: bool,
    pub safety_violations: usize,
    pub rounds_to_converge: Option<usize>,
    pub final_spread: f64,
    pub attackers: BTreeMap<NodeId, AttackerSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scheme: Scheme,
    pub normal: Vec<bool>,
    /// `values[k][i-1]` is node `i`'s value at round `k`; for attackers the
    /// value it broadcast.
    pub values: Vec<Vec<f64>>,
    /// Verdicts issued by normal nodes.
    pub verdicts: Vec<DetectionVerdict>,
    pub flag_events: Vec<FlagEvent>,
    pub first_deviation: BTreeMap<NodeId, usize>,
    pub undecided_votes: usize,
    pub messages: Option<Vec<Vec<Broadcast>>>,
    pub evaluation: Evaluation,
}

impl RunRecord {
    /// Number of executed rounds; `values` holds one more row.
    pub fn rounds_run(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_normal(&self, id: NodeId) -> bool {
        self.normal[id - 1]
    }

    pub fn normal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..=self.normal.len()).filter(|&i| self.normal[i - 1])
    }

    /// Malicious set of `node` at the start of `round`.
    pub fn malicious_set_at(&self, node: NodeId, round: usize) -> BTreeSet<NodeId> {
        self.flag_events
            .iter()
            .filter(|e| e.node == node && e.round < round)
            .map(|e| e.suspect)
            .collect()
    }
}

pub(crate) fn spread(values: &[f64], normal: &[bool]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (v, _) in values.iter().zip(normal).filter(|(_, n)| **n) {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if lo > hi {
        0.0
    } else {
        hi - lo
    }
}

pub fn evaluate(rec: &RunRecord, cfg: &RunConfig) -> Evaluation {
    let iv = cfg.safety_interval;
    let admissible: Vec<f64> = cfg.initial_values.iter().copied().filter(|v| iv.contains(*v)).collect();
    let safety_set = if admissible.is_empty() {
        (iv.min, iv.max)
    } else {
        (
            admissible.iter().copied().fold(f64::INFINITY, f64::min),
            admissible.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    // absorbs the last-bit rounding of an average of values inside S
    let tol = |b: f64| 1e-9 * b.abs().max(1.0);
    let (lo, hi) = (safety_set.0 - tol(safety_set.0), safety_set.1 + tol(safety_set.1));
    let safety_violations = rec
        .values
        .iter()
        .flat_map(|row| row.iter().zip(&rec.normal))
        .filter(|(v, n)| **n && !(lo <= **v && **v <= hi))
        .count();
    let safety_ok = safety_violations == 0;

    let last = rec.rounds_run();
    let spreads: Vec<f64> = rec.values.iter().map(|row| spread(row, &rec.normal)).collect();
    let final_spread = spreads[last];
    let converged = final_spread <= cfg.epsilon && cfg.min_stop_round().is_none_or(|m| last > m);
    let rounds_to_converge = converged.then(|| {
        spreads
            .iter()
            .rposition(|s| *s > cfg.epsilon)
            .map_or(0, |r| r + 1)
    });

    let outcome = if !safety_ok {
        Outcome::SafetyViolated
    } else if converged {
        Outcome::Converged
    } else if rec.undecided_votes > 0 {
        Outcome::ConditionViolated
    } else {
        Outcome::Diverged
    };

    let mut attackers = BTreeMap::new();
    for a in cfg.attackers() {
        let first_deviation = rec.first_deviation.get(&a).copied();
        let first_verdict = rec.verdicts.iter().filter(|v| v.suspect == a).map(|v| v.round).min();
        let watchers: Vec<NodeId> = rec.normal_nodes().filter(|&i| i != a).collect();
        let network_flag_round = if watchers.is_empty() {
            None
        } else {
            watchers
                .iter()
                .map(|&i| {
                    rec.flag_events
                        .iter()
                        .filter(|e| e.node == i && e.suspect == a)
                        .map(|e| e.round + 1)
                        .min()
                })
                .collect::<Option<Vec<_>>>()
                .and_then(|rs| rs.into_iter().max())
        };
        let latency = match (first_deviation, network_flag_round) {
            (Some(d), Some(f)) => Some(f.saturating_sub(d)),
            _ => None,
        };
        attackers.insert(
            a,
            AttackerSummary {
                first_deviation,
                first_verdict,
                network_flag_round,
                latency,
            },
        );
    }

    Evaluation {
        outcome,
        safety_set,
        safety_ok,
        safety_violations,
        rounds_to_converge,
        final_spread,
        attackers,
    }
}

/// Decimal rendering rounded to 12 significant digits, shortest form.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

fn join_ids(ids: impl IntoIterator<Item = NodeId>) -> String {
    ids.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
}

/// One line per (round, node): value, malicious set at the start of the
/// round, verdicts issued in the round as `suspect:reason`.
pub fn render_trace(rec: &RunRecord) -> String {
    let n = rec.normal.len();
    let mut out = String::new();
    let _ = writeln!(out, "{TRACE_HEADER}");
    let _ = writeln!(out, "round,node,role,value,malicious_set,verdicts");
    let mut sets: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    let mut events = rec.flag_events.iter().peekable();
    let mut verdicts: BTreeMap<(usize, NodeId), Vec<&DetectionVerdict>> = BTreeMap::new();
    for v in &rec.verdicts {
        verdicts.entry((v.round, v.detector)).or_default().push(v);
    }
    for (k, row) in rec.values.iter().enumerate() {
        while let Some(e) = events.next_if(|e| e.round < k) {
            sets[e.node - 1].insert(e.suspect);
        }
        for i in 1..=n {
            let role = if rec.normal[i - 1] { "normal" } else { "attacker" };
            let vs = verdicts
                .get(&(k, i))
                .map(|vs| {
                    vs.iter()
                        .map(|v| format!("{}:{}", v.suspect, v.reason))
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{k},{i},{role},{},{},{vs}",
                fmt_sig(row[i - 1]),
                join_ids(sets[i - 1].iter().copied())
            );
        }
    }
    out
}

/// One line per (round, sender) with the broadcast content, or `silent`.
pub fn render_message_trace(rec: &RunRecord) -> Option<String> {
    let log = rec.messages.as_ref()?;
    let mut out = String::new();
    let _ = writeln!(out, "{MESSAGE_HEADER}");
    let _ = writeln!(out, "round,sender,own,neighbors,declared,reports");
    for (k, msgs) in log.iter().enumerate() {
        for (idx, b) in msgs.iter().enumerate() {
            match b {
                Broadcast::Silence => {
                    let _ = writeln!(out, "{k},{},silent,,,", idx + 1);
                }
                Broadcast::Message(m) => {
                    let nv = m
                        .neighbor_values
                        .iter()
                        .map(|(h, v)| match v {
                            Some(x) => format!("{h}:{}", fmt_sig(*x)),
                            None => format!("{h}:-"),
                        })
                        .collect::<Vec<_>>()
                        .join(";");
                    let _ = writeln!(
                        out,
                        "{k},{},{},{nv},{},{}",
                        m.sender,
                        fmt_sig(m.own_value),
                        join_ids(m.declared_malicious.iter().copied()),
                        join_ids(m.reports.iter().copied())
                    );
                }
            }
        }
    }
    Some(out)
}
