//! Structural report on a graph for a given `f`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::engine::Scheme;
use crate::graph::{
    has_k_connected_rooted_spanning_trees, is_rs_robust, is_strongly_connected, vertex_connectivity, DirectedGraph,
    GraphError, NodeId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
    /// A needed predicate exceeded the brute-force cap.
    Unknown,
}

impl Verdict {
    fn from_parts(parts: &[Option<bool>]) -> Self {
        if parts.contains(&Some(false)) {
            Verdict::Violated
        } else if parts.iter().all(|p| p.is_some()) {
            Verdict::Satisfied
        } else {
            Verdict::Unknown
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphReport {
    pub nodes: usize,
    pub arcs: usize,
    pub undirected: bool,
    pub f: usize,
    pub strongly_connected: bool,
    /// Undirected graphs only.
    pub kappa: Option<usize>,
    /// Undirected graphs only.
    pub scheme1_condition: Option<bool>,
    pub min_common_neighbors: Option<usize>,
    pub scheme2_condition: bool,
    pub scheme2_violations: usize,
    /// `None` beyond the brute-force cap.
    pub rooted_trees: Option<bool>,
    pub robust: Option<bool>,
    pub full_access: BTreeSet<NodeId>,
    pub verdicts: Vec<(Scheme, Verdict)>,
}

impl GraphReport {
    pub fn verdict(&self, scheme: Scheme) -> Verdict {
        self.verdicts
            .iter()
            .find(|(s, _)| *s == scheme)
            .map(|(_, v)| *v)
            .unwrap_or(Verdict::Unknown)
    }

    pub fn render(&self, focus: Option<Scheme>) -> String {
        let b = |v: Option<bool>| v.map_or_else(|| "n/a".to_string(), |x| x.to_string());
        let mut s = String::new();
        let _ = writeln!(
            s,
            "nodes {} arcs {} {}",
            self.nodes,
            self.arcs,
            if self.undirected { "undirected" } else { "directed" }
        );
        let _ = writeln!(s, "f {}", self.f);
        let _ = writeln!(s, "strongly connected: {}", self.strongly_connected);
        let _ = writeln!(s, "kappa: {}", self.kappa.map_or_else(|| "n/a".into(), |k| k.to_string()));
        let _ = writeln!(
            s,
            "scheme1 two-hop condition: {} (min common neighbors {})",
            b(self.scheme1_condition),
            self.min_common_neighbors.map_or_else(|| "-".into(), |m| m.to_string())
        );
        let _ = writeln!(
            s,
            "scheme2 two-hop condition: {} ({} violating triples)",
            self.scheme2_condition, self.scheme2_violations
        );
        let _ = writeln!(s, "{}-connected rooted spanning trees: {}", self.f + 1, b(self.rooted_trees));
        let _ = writeln!(s, "({0},{0})-robust: {1}", self.f + 1, b(self.robust));
        let fa: Vec<String> = self.full_access.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "full-access nodes: {}", if fa.is_empty() { "-".into() } else { fa.join(" ") });
        for (scheme, v) in &self.verdicts {
            let mark = if Some(*scheme) == focus { " *" } else { "" };
            let _ = writeln!(s, "verdict {scheme}: {v}{mark}");
        }
        s
    }
}

fn capped(r: Result<bool, GraphError>) -> Result<Option<bool>, GraphError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(GraphError::InstanceTooLarge { .. }) | Err(GraphError::TooFewNodes { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluates every structural predicate the schemes rely on.
///
/// Verdicts: `plain` needs `f = 0` and strong connectivity; `wmsr` needs
/// `(f+1, f+1)`-robustness; `scheme1` needs an undirected graph with
/// `κ >= f + 1` and the two-hop condition; `scheme2` needs its two-hop
/// condition and `(f+1)`-connected rooted spanning trees.
pub fn check_graph(g: &DirectedGraph, f: usize) -> Result<GraphReport, GraphError> {
    let undirected = g.is_undirected();
    let strongly_connected = is_strongly_connected(g);
    let kappa = if undirected && g.node_count() >= 2 {
        Some(vertex_connectivity(g)?)
    } else {
        None
    };
    let scheme1_condition = if undirected {
        Some(g.check_scheme1_condition(f)?.holds())
    } else {
        None
    };
    let s2 = g.check_scheme2_condition(f);
    let rooted_trees = if g.node_count() > f + 1 {
        capped(has_k_connected_rooted_spanning_trees(g, f + 1))?
    } else {
        Some(false)
    };
    let robust = if g.node_count() > f {
        capped(is_rs_robust(g, f + 1, f + 1).map(|r| r.robust))?
    } else {
        Some(false)
    };

    let plain = Verdict::from_parts(&[Some(f == 0 && strongly_connected)]);
    let wmsr = Verdict::from_parts(&[robust]);
    let scheme1 = Verdict::from_parts(&[
        Some(undirected),
        kappa.map(|k| k > f),
        scheme1_condition,
    ]);
    let scheme2 = Verdict::from_parts(&[Some(s2.holds()), rooted_trees]);

    Ok(GraphReport {
        nodes: g.node_count(),
        arcs: g.arc_count(),
        undirected,
        f,
        strongly_connected,
        kappa,
        scheme1_condition,
        min_common_neighbors: g.min_adjacent_two_hop(),
        scheme2_condition: s2.holds(),
        scheme2_violations: s2.violations.len(),
        rooted_trees,
        robust,
        full_access: g.full_access_nodes(),
        verdicts: vec![
            (Scheme::Plain, plain),
            (Scheme::Wmsr, wmsr),
            (Scheme::Scheme1, scheme1),
            (Scheme::Scheme2, scheme2),
        ],
    })
}
