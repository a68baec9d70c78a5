//! Vertex connectivity and rooted-spanning-tree connectivity.
//!
//! Small graphs go through exhaustive removal-set enumeration over bitmasks;
//! larger undirected graphs use unit-capacity max-flow on the node-split
//! network (minimum vertex cut).

use std::collections::VecDeque;

use super::{DirectedGraph, GraphError, NodeId, Result, DEFAULT_BRUTE_FORCE_CAP};

/// Graphs up to this size use enumeration for `vertex_connectivity`.
const ENUMERATION_LIMIT: usize = 16;

/// Bitmask adjacency (bit `v-1` set in `out[u-1]` iff `(u, v)` in E).
pub(crate) struct Masks {
    pub n: usize,
    pub out: Vec<u64>,
    pub inn: Vec<u64>,
}

impl Masks {
    pub fn new(g: &DirectedGraph) -> Self {
        assert!(g.node_count() <= 64, "bitmask view limited to 64 nodes");
        let n = g.node_count();
        let mut out = vec![0u64; n];
        let mut inn = vec![0u64; n];
        for (u, v) in g.edges() {
            out[u - 1] |= 1 << (v - 1);
            inn[v - 1] |= 1 << (u - 1);
        }
        Self { n, out, inn }
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Nodes of `alive` reachable from bit `start` using only alive nodes.
    pub fn reach(&self, start: usize, alive: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let b = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.out[b];
            }
            next &= alive & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Some alive node reaches every other alive node.
    pub fn has_rooted_spanning_tree(&self, alive: u64) -> bool {
        if alive.count_ones() <= 1 {
            return true;
        }
        let mut a = alive;
        while a != 0 {
            let b = a.trailing_zeros() as usize;
            a &= a - 1;
            if self.reach(b, alive) == alive {
                return true;
            }
        }
        false
    }

    /// Every alive node reaches every other (strong connectivity; for
    /// symmetric adjacency this is plain connectivity).
    pub fn strongly_connected(&self, alive: u64) -> bool {
        if alive.count_ones() <= 1 {
            return true;
        }
        let start = alive.trailing_zeros() as usize;
        if self.reach(start, alive) != alive {
            return false;
        }
        // reverse reachability
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let b = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.inn[b];
            }
            next &= alive & !seen;
            seen |= next;
            frontier = next;
        }
        seen == alive
    }
}

/// Calls `visit` on every `k`-subset of the low `n` bits (Gosper's hack).
/// Stops early when `visit` returns `false`; returns whether it ran to the end.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(u64) -> bool) -> bool {
    if k > n {
        return true;
    }
    if k == 0 {
        return visit(0);
    }
    let limit: u128 = 1u128 << n;
    let mut s: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    loop {
        if !visit(s) {
            return false;
        }
        let c = s & s.wrapping_neg();
        let r = s as u128 + c as u128;
        if r >= limit {
            return true;
        }
        let r = r as u64;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// Whether the whole graph is strongly connected (connected if undirected).
pub fn is_strongly_connected(g: &DirectedGraph) -> bool {
    let n = g.node_count();
    if n <= 1 {
        return true;
    }
    let forward = bfs_count(n, 1, |u| g.outs(u));
    forward == n && bfs_count(n, 1, |u| g.ins(u)) == n
}

fn bfs_count<'a, F>(n: usize, start: NodeId, next: F) -> usize
where
    F: Fn(NodeId) -> &'a std::collections::BTreeSet<NodeId>,
{
    let mut seen = vec![false; n + 1];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in next(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count
}

fn check_connectivity_preconditions(g: &DirectedGraph) -> Result<()> {
    if g.node_count() < 2 {
        return Err(GraphError::TooFewNodes {
            needed: 2,
            n: g.node_count(),
        });
    }
    if !g.is_undirected() {
        return Err(GraphError::NotUndirected);
    }
    Ok(())
}

/// Vertex connectivity κ(G): the largest `k` such that G has at least `k+1`
/// nodes and no `k-1` nodes whose removal disconnects it. `K_n` gives `n-1`,
/// a disconnected graph gives 0.
pub fn vertex_connectivity(g: &DirectedGraph) -> Result<usize> {
    check_connectivity_preconditions(g)?;
    if g.node_count() <= ENUMERATION_LIMIT {
        vertex_connectivity_enumerated(g)
    } else {
        vertex_connectivity_max_flow(g)
    }
}

/// κ(G) by trying removal sets of increasing size. Exponential; limited to
/// 64 nodes by the bitmask representation.
pub fn vertex_connectivity_enumerated(g: &DirectedGraph) -> Result<usize> {
    check_connectivity_preconditions(g)?;
    let n = g.node_count();
    if n > 64 {
        return Err(GraphError::InstanceTooLarge { n, cap: 64 });
    }
    let masks = Masks::new(g);
    let full = masks.full();
    for k in 0..=n.saturating_sub(2) {
        let mut found = false;
        for_each_subset(n, k, |removed| {
            if !masks.strongly_connected(full & !removed) {
                found = true;
                return false;
            }
            true
        });
        if found {
            return Ok(k);
        }
    }
    Ok(n - 1)
}

/// κ(G) via the minimum vertex cut between non-adjacent pairs, computed as
/// max-flow on the node-split network. Only sources among the first
/// `κ + 1` nodes need to be tried.
pub fn vertex_connectivity_max_flow(g: &DirectedGraph) -> Result<usize> {
    check_connectivity_preconditions(g)?;
    let n = g.node_count();
    // κ <= minimum degree, and κ = n-1 exactly for complete graphs.
    let mut best = g.min_in_degree().min(n - 1);
    let mut source = 1;
    while source <= n && source <= best + 1 {
        for target in source + 1..=n {
            if g.has_edge(source, target) {
                continue;
            }
            let flow = node_disjoint_paths(g, source, target, best);
            best = best.min(flow);
        }
        source += 1;
    }
    Ok(best)
}

/// Number of internally node-disjoint `s -> t` paths, capped at `limit`.
fn node_disjoint_paths(g: &DirectedGraph, s: NodeId, t: NodeId, limit: usize) -> usize {
    let n = g.node_count();
    let inf = n as i32;
    let mut net = FlowNetwork::new(2 * n);
    let node_in = |v: NodeId| 2 * (v - 1);
    let node_out = |v: NodeId| 2 * (v - 1) + 1;
    for v in g.nodes() {
        let cap = if v == s || v == t { inf } else { 1 };
        net.add_arc(node_in(v), node_out(v), cap);
    }
    for (u, v) in g.edges() {
        net.add_arc(node_out(u), node_in(v), inf);
    }
    net.max_flow(node_out(s), node_in(t), limit)
}

struct FlowArc {
    to: usize,
    cap: i32,
}

struct FlowNetwork {
    arcs: Vec<FlowArc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(size: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); size],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i32) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(FlowArc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(FlowArc { to: from, cap: 0 });
    }

    /// Edmonds-Karp, stopping once `limit` units have been pushed.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        let size = self.adj.len();
        let mut parent_arc = vec![usize::MAX; size];
        while flow < limit {
            parent_arc.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.arcs[a].to;
                    if self.arcs[a].cap > 0 && v != s && parent_arc[v] == usize::MAX {
                        parent_arc[v] = a;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !reached {
                break;
            }
            // unit augmentation: every s-t path crosses a unit-capacity split arc
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                self.arcs[a].cap -= 1;
                self.arcs[a ^ 1].cap += 1;
                v = self.arcs[a ^ 1].to;
            }
            flow += 1;
        }
        flow
    }
}

/// Whether no removal of `k-1` nodes leaves a digraph without a rooted
/// spanning tree. Brute force over all `(k-1)`-subsets with the default cap.
pub fn has_k_connected_rooted_spanning_trees(g: &DirectedGraph, k: usize) -> Result<bool> {
    has_k_connected_rooted_spanning_trees_capped(g, k, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn has_k_connected_rooted_spanning_trees_capped(
    g: &DirectedGraph,
    k: usize,
    cap: usize,
) -> Result<bool> {
    let n = g.node_count();
    if k == 0 {
        return Err(GraphError::InvalidParameter("k must be positive".into()));
    }
    if n <= k {
        return Err(GraphError::TooFewNodes { needed: k + 1, n });
    }
    let cap = cap.min(64);
    if n > cap {
        return Err(GraphError::InstanceTooLarge { n, cap });
    }
    let masks = Masks::new(g);
    let full = masks.full();
    Ok(for_each_subset(n, k - 1, |removed| {
        masks.has_rooted_spanning_tree(full & !removed)
    }))
}
