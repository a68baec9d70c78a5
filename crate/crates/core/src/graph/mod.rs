//! Directed graph substrate and the structural predicates the detection
//! schemes depend on.
//!
//! Node ids are 1-based. A graph flagged as undirected keeps its edge set
//! symmetric: every mutation through [`DirectedGraph::add_edge`] inserts both
//! directions.

mod connectivity;
mod geometric;
mod io;
mod robust;

use std::collections::BTreeSet;

use thiserror::Error;

pub use connectivity::{
    has_k_connected_rooted_spanning_trees, has_k_connected_rooted_spanning_trees_capped,
    is_strongly_connected, vertex_connectivity, vertex_connectivity_enumerated,
    vertex_connectivity_max_flow,
};
pub use geometric::{
    augment_with_relays, generate_geometric, geometric_from_positions, relay_positions,
    GeometricConfig, Point,
};
pub use io::{parse_edge_list, read_edge_list, render_edge_list, write_edge_list};
pub use robust::{is_rs_robust, is_rs_robust_capped, Robustness, RobustnessWitness};

/// Node identifier, 1-based.
pub type NodeId = usize;

/// Default node cap for the exponential brute-force predicates.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node id {id} out of range 1..={n}")]
    NodeOutOfRange { id: NodeId, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("operation needs at least {needed} nodes, graph has {n}")]
    TooFewNodes { needed: usize, n: usize },
    #[error("operation requires an undirected graph")]
    NotUndirected,
    #[error("instance too large: {n} nodes exceeds the brute-force cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("endpoints must differ (got {0} twice)")]
    SameEndpoints(NodeId),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    undirected: bool,
    in_adj: Vec<BTreeSet<NodeId>>,
    out_adj: Vec<BTreeSet<NodeId>>,
}

impl DirectedGraph {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize, undirected: bool) -> Self {
        Self {
            n,
            undirected,
            in_adj: vec![BTreeSet::new(); n],
            out_adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, undirected: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::new(n, undirected);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n, true);
        for u in 1..=n {
            for v in 1..=n {
                if u != v {
                    g.insert_arc(u, v);
                }
            }
        }
        g
    }

    /// Undirected cycle `1-2-...-n-1`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n, true);
        for u in 1..=n {
            let v = u % n + 1;
            if u != v {
                g.insert_arc(u, v);
                g.insert_arc(v, u);
            }
        }
        g
    }

    /// Directed cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn directed_cycle(n: usize) -> Self {
        let mut g = Self::new(n, false);
        for u in 1..=n {
            let v = u % n + 1;
            if u != v {
                g.insert_arc(u, v);
            }
        }
        g
    }

    /// Undirected path `1-2-...-n`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n, true);
        for u in 1..n {
            g.insert_arc(u, u + 1);
            g.insert_arc(u + 1, u);
        }
        g
    }

    /// Undirected layered graph: `layers` groups of `width` nodes, every node
    /// linked to every node of the adjacent layers and to none of its own.
    /// Layer `l` (0-based) holds ids `l*width+1 ..= (l+1)*width`.
    pub fn layered(layers: usize, width: usize) -> Self {
        let n = layers * width;
        let mut g = Self::new(n, true);
        for l in 0..layers.saturating_sub(1) {
            for a in 0..width {
                for b in 0..width {
                    let u = l * width + a + 1;
                    let v = (l + 1) * width + b + 1;
                    g.insert_arc(u, v);
                    g.insert_arc(v, u);
                }
            }
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        1..=self.n
    }

    pub fn check_node(&self, id: NodeId) -> Result<()> {
        if id == 0 || id > self.n {
            Err(GraphError::NodeOutOfRange { id, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Adds `(u, v)`; for undirected graphs also `(v, u)`. Re-adding an
    /// existing edge is a no-op.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.insert_arc(u, v);
        if self.undirected {
            self.insert_arc(v, u);
        }
        Ok(())
    }

    /// Removes `(u, v)`, and `(v, u)` when undirected.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        self.out_adj[u - 1].remove(&v);
        self.in_adj[v - 1].remove(&u);
        if self.undirected {
            self.out_adj[v - 1].remove(&u);
            self.in_adj[u - 1].remove(&v);
        }
        Ok(())
    }

    /// Same edge set, viewed as a digraph (undirected flag cleared).
    pub fn into_directed(mut self) -> Self {
        self.undirected = false;
        self
    }

    pub(crate) fn insert_arc(&mut self, u: NodeId, v: NodeId) {
        self.out_adj[u - 1].insert(v);
        self.in_adj[v - 1].insert(u);
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u >= 1 && u <= self.n && self.out_adj[u - 1].contains(&v)
    }

    /// In-neighbor set `N_i = { j : (j, i) in E }`.
    pub fn in_neighbors(&self, i: NodeId) -> Result<&BTreeSet<NodeId>> {
        self.check_node(i)?;
        Ok(&self.in_adj[i - 1])
    }

    pub fn out_neighbors(&self, i: NodeId) -> Result<&BTreeSet<NodeId>> {
        self.check_node(i)?;
        Ok(&self.out_adj[i - 1])
    }

    /// Unchecked in-neighbor access for ids already known to be valid.
    pub(crate) fn ins(&self, i: NodeId) -> &BTreeSet<NodeId> {
        &self.in_adj[i - 1]
    }

    pub(crate) fn outs(&self, i: NodeId) -> &BTreeSet<NodeId> {
        &self.out_adj[i - 1]
    }

    pub fn in_degree(&self, i: NodeId) -> Result<usize> {
        self.in_neighbors(i).map(BTreeSet::len)
    }

    pub fn min_in_degree(&self) -> usize {
        self.in_adj.iter().map(BTreeSet::len).min().unwrap_or(0)
    }

    /// All arcs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u + 1, v)))
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(BTreeSet::len).sum()
    }

    /// True if `(u, v)` in E implies `(v, u)` in E.
    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(u, v)| self.has_edge(v, u))
    }

    /// Intermediate nodes `m` with `(from, m)` and `(m, to)` both in E.
    pub fn two_hop_paths(&self, from: NodeId, to: NodeId) -> Result<BTreeSet<NodeId>> {
        self.check_node(from)?;
        self.check_node(to)?;
        if from == to {
            return Err(GraphError::SameEndpoints(from));
        }
        Ok(self
            .outs(from)
            .intersection(self.ins(to))
            .copied()
            .collect())
    }

    pub(crate) fn two_hop_count(&self, from: NodeId, to: NodeId) -> usize {
        self.outs(from).intersection(self.ins(to)).count()
    }

    /// Nodes with in-degree `n - 1`.
    pub fn full_access_nodes(&self) -> BTreeSet<NodeId> {
        self.nodes()
            .filter(|&i| self.n > 0 && self.ins(i).len() == self.n - 1)
            .collect()
    }

    /// Two-hop condition for the detection-share scheme: every adjacent pair
    /// is joined by at least `f - 1` two-hop paths. Violating pairs are
    /// reported once each, as `(smaller id, larger id)`.
    pub fn check_scheme1_condition(&self, f: usize) -> Result<ConditionReport<(NodeId, NodeId)>> {
        if !self.undirected {
            return Err(GraphError::NotUndirected);
        }
        let need = f.saturating_sub(1);
        let violations = self
            .edges()
            .filter(|&(u, v)| u < v && self.two_hop_count(u, v) < need)
            .collect();
        Ok(ConditionReport { violations })
    }

    /// Condition for fully distributed detection: for every node `i`, every
    /// in-neighbor `j` and every `h` in `N_j \ {i}`, either `h` is itself an
    /// in-neighbor of `i` or there are at least `2f + 1` two-hop paths from
    /// `h` to `i`.
    pub fn check_scheme2_condition(&self, f: usize) -> ConditionReport<(NodeId, NodeId, NodeId)> {
        let need = 2 * f + 1;
        let mut violations = Vec::new();
        for i in self.nodes() {
            let ni = self.ins(i);
            for &j in ni {
                for &h in self.ins(j) {
                    if h == i || ni.contains(&h) {
                        continue;
                    }
                    if self.two_hop_count(h, i) < need {
                        violations.push((i, j, h));
                    }
                }
            }
        }
        ConditionReport { violations }
    }

    /// Smallest number of common neighbors over adjacent pairs, or `None`
    /// for an edgeless graph. Scheme-1 condition holds iff this is `>= f-1`.
    pub fn min_adjacent_two_hop(&self) -> Option<usize> {
        self.edges()
            .filter(|&(u, v)| u < v || !self.undirected)
            .map(|(u, v)| self.two_hop_count(u, v).min(self.two_hop_count(v, u)))
            .min()
    }

    /// Smallest two-hop path count over the triples the scheme-2 condition
    /// constrains, or `None` if no triple needs the path alternative. The
    /// condition holds for `f` iff this is `>= 2f + 1`.
    pub fn min_scheme2_paths(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut seen = BTreeSet::new();
        for i in self.nodes() {
            let ni = self.ins(i);
            seen.clear();
            for &j in ni {
                for &h in self.ins(j) {
                    if h == i || ni.contains(&h) || !seen.insert(h) {
                        continue;
                    }
                    let c = self.two_hop_count(h, i);
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
        best
    }
}

/// Outcome of a structural condition check, with every violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport<T> {
    pub violations: Vec<T>,
}

impl<T> ConditionReport<T> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}
