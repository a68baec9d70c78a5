//! Random geometric graphs in a square box, with optional relay augmentation.
//!
//! Positions come from a `ChaCha8Rng` seeded with `seed_from_u64(seed)`;
//! for each node in id order the x coordinate is drawn first, then y, both
//! uniform on `[0, box_side)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DirectedGraph, GraphError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricConfig {
    pub node_count: usize,
    pub box_side: f64,
    pub radius: f64,
    pub relay_count: usize,
    pub relay_radius_bonus: f64,
    pub relay_grid_spacing: f64,
    pub seed: u64,
}

impl Default for GeometricConfig {
    fn default() -> Self {
        Self {
            node_count: 100,
            box_side: 100.0,
            radius: 20.0,
            relay_count: 0,
            relay_radius_bonus: 27.0,
            relay_grid_spacing: 20.0,
            seed: 0,
        }
    }
}

impl GeometricConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(GraphError::InvalidParameter("node_count must be positive".into()));
        }
        if !(self.box_side > 0.0) {
            return Err(GraphError::InvalidParameter("box_side must be positive".into()));
        }
        if !(self.radius >= 0.0) {
            return Err(GraphError::InvalidParameter("radius must be non-negative".into()));
        }
        if !(self.relay_radius_bonus >= 0.0) {
            return Err(GraphError::InvalidParameter(
                "relay_radius_bonus must be non-negative".into(),
            ));
        }
        relay_positions(self).map(|_| ())
    }
}

/// Draws positions and connects every pair at distance `<= radius`.
pub fn generate_geometric(cfg: &GeometricConfig) -> Result<(DirectedGraph, Vec<Point>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let positions: Vec<Point> = (0..cfg.node_count)
        .map(|_| {
            let x = rng.gen_range(0.0..cfg.box_side);
            let y = rng.gen_range(0.0..cfg.box_side);
            Point { x, y }
        })
        .collect();
    let g = geometric_from_positions(&positions, cfg.radius);
    Ok((g, positions))
}

/// Undirected disk graph over fixed positions (closed ball).
pub fn geometric_from_positions(positions: &[Point], radius: f64) -> DirectedGraph {
    let n = positions.len();
    let mut g = DirectedGraph::new(n, true);
    for u in 0..n {
        for v in u + 1..n {
            if positions[u].dist(positions[v]) <= radius {
                g.insert_arc(u + 1, v + 1);
                g.insert_arc(v + 1, u + 1);
            }
        }
    }
    g
}

/// Relay points on the grid `(s*x, s*y)`, `x, y = 1, 2, ...`, row-major over
/// a `ceil(sqrt(count))`-wide square, truncated to `count` points.
pub fn relay_positions(cfg: &GeometricConfig) -> Result<Vec<Point>> {
    if cfg.relay_count == 0 {
        return Ok(Vec::new());
    }
    let side = (cfg.relay_count as f64).sqrt().ceil() as usize;
    let mut out = Vec::with_capacity(cfg.relay_count);
    'grid: for x in 1..=side {
        for y in 1..=side {
            if out.len() == cfg.relay_count {
                break 'grid;
            }
            let p = Point {
                x: cfg.relay_grid_spacing * x as f64,
                y: cfg.relay_grid_spacing * y as f64,
            };
            if p.x < 0.0 || p.y < 0.0 || p.x > cfg.box_side || p.y > cfg.box_side {
                return Err(GraphError::InvalidParameter(format!(
                    "relay at ({}, {}) lies outside the box",
                    p.x, p.y
                )));
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// Adds arc `(u, w)` whenever some relay hears `u` (within `radius`) and
/// reaches `w` (within `radius + relay_radius_bonus`). The result is a
/// digraph even when `g` was undirected.
pub fn augment_with_relays(
    g: &DirectedGraph,
    positions: &[Point],
    cfg: &GeometricConfig,
) -> Result<DirectedGraph> {
    if positions.len() != g.node_count() {
        return Err(GraphError::InvalidParameter(format!(
            "{} positions for {} nodes",
            positions.len(),
            g.node_count()
        )));
    }
    let relays = relay_positions(cfg)?;
    if relays.is_empty() {
        return Ok(g.clone());
    }
    let mut out = g.clone().into_directed();
    let far = cfg.radius + cfg.relay_radius_bonus;
    for p in &relays {
        let heard: Vec<usize> = (0..positions.len())
            .filter(|&u| positions[u].dist(*p) <= cfg.radius)
            .collect();
        if heard.is_empty() {
            continue;
        }
        let reached: Vec<usize> = (0..positions.len())
            .filter(|&w| positions[w].dist(*p) <= far)
            .collect();
        for &u in &heard {
            for &w in &reached {
                if u != w {
                    out.insert_arc(u + 1, w + 1);
                }
            }
        }
    }
    Ok(out)
}
