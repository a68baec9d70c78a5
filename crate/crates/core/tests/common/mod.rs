#![allow(dead_code)]

use twohop_core::graph::{DirectedGraph, NodeId};

/// Direct reading of the robustness definition: every node is put in
/// `S1`, `S2` or neither, and each pair of non-empty subsets is checked.
pub fn naive_rs_robust(g: &DirectedGraph, r: usize, s: usize) -> bool {
    let n = g.node_count();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut side = vec![0u8; n + 1];
        let mut c = code;
        for v in 1..=n {
            side[v] = (c % 3) as u8;
            c /= 3;
        }
        let s1: Vec<NodeId> = (1..=n).filter(|&v| side[v] == 1).collect();
        let s2: Vec<NodeId> = (1..=n).filter(|&v| side[v] == 2).collect();
        if s1.is_empty() || s2.is_empty() {
            continue;
        }
        let reached = |set: &[NodeId], tag: u8| {
            set.iter()
                .filter(|&&v| g.in_neighbors(v).unwrap().iter().filter(|&&u| side[u] != tag).count() >= r)
                .count()
        };
        let x1 = reached(&s1, 1);
        let x2 = reached(&s2, 2);
        if !(x1 == s1.len() || x2 == s2.len() || x1 + x2 >= s) {
            return false;
        }
    }
    true
}

/// Graph on `n` nodes with arc `u -> v` wherever `bits[(u-1)*n + (v-1)]` is
/// set. Undirected graphs read only the upper triangle.
pub fn build(n: usize, undirected: bool, bits: &[bool]) -> DirectedGraph {
    let mut g = DirectedGraph::new(n, undirected);
    for u in 1..=n {
        for v in 1..=n {
            if u != v && bits[(u - 1) * n + (v - 1)] && (!undirected || u < v) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}
