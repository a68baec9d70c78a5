//! Edge-list text format.
//!
//! ```text
//! undirected 4
//! # comment
//! 1 2
//! 2 3
//! ```
//!
//! Ids are 1-based. Undirected files list each edge once; the writer emits
//! the `u < v` orientation.

use std::fmt::Write as _;
use std::path::Path;

use super::{DirectedGraph, GraphError, Result};

pub fn parse_edge_list(text: &str) -> Result<DirectedGraph> {
    let mut graph: Option<DirectedGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| GraphError::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(g) = graph.as_mut() else {
            let [kind, n] = fields[..] else {
                return Err(err(format!("expected `directed <n>` or `undirected <n>`, got `{line}`")));
            };
            let undirected = match kind {
                "directed" => false,
                "undirected" => true,
                other => return Err(err(format!("unknown graph kind `{other}`"))),
            };
            let n: usize = n.parse().map_err(|_| err(format!("bad node count `{n}`")))?;
            if n == 0 {
                return Err(err("node count must be positive".into()));
            }
            graph = Some(DirectedGraph::new(n, undirected));
            continue;
        };
        let [a, b] = fields[..] else {
            return Err(err(format!("expected `<u> <v>`, got `{line}`")));
        };
        let u: usize = a.parse().map_err(|_| err(format!("bad node id `{a}`")))?;
        let v: usize = b.parse().map_err(|_| err(format!("bad node id `{b}`")))?;
        g.check_node(u).map_err(|e| err(e.to_string()))?;
        g.check_node(v).map_err(|e| err(e.to_string()))?;
        if u == v {
            return Err(err(format!("self-loop on node {u}")));
        }
        if g.has_edge(u, v) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
        g.add_edge(u, v).map_err(|e| err(e.to_string()))?;
    }
    graph.ok_or(GraphError::Parse {
        line: text.lines().count().max(1),
        message: "missing header".into(),
    })
}

pub fn render_edge_list(g: &DirectedGraph) -> String {
    let kind = if g.is_undirected() { "undirected" } else { "directed" };
    let mut out = format!("{kind} {}\n", g.node_count());
    for (u, v) in g.edges() {
        if g.is_undirected() && u > v {
            continue;
        }
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<DirectedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

pub fn write_edge_list(g: &DirectedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_edge_list(g))
        .map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))
}
