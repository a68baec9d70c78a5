//! (r, s)-robustness by exhaustive subset-pair search.
//!
//! For every node subset `S` the set `X^r_S` (members of `S` with at least
//! `r` in-neighbors outside `S`) is tabulated once; the pair search then
//! only walks submasks of the complement of `V1`. Cost is `O(3^n)` pairs, so
//! the search refuses graphs above a node cap instead of approximating.

use std::collections::BTreeSet;

use super::connectivity::Masks;
use super::{DirectedGraph, GraphError, NodeId, Result, DEFAULT_BRUTE_FORCE_CAP};

/// Hard ceiling for overriding the cap: the `X^r` table has `2^n` entries.
const ABSOLUTE_CAP: usize = 26;

/// A pair of disjoint subsets for which none of the robustness conditions
/// holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessWitness {
    pub subset_one: BTreeSet<NodeId>,
    pub subset_two: BTreeSet<NodeId>,
    pub reached_one: BTreeSet<NodeId>,
    pub reached_two: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Robustness {
    pub robust: bool,
    pub witness: Option<RobustnessWitness>,
}

pub fn is_rs_robust(g: &DirectedGraph, r: usize, s: usize) -> Result<Robustness> {
    is_rs_robust_capped(g, r, s, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn is_rs_robust_capped(g: &DirectedGraph, r: usize, s: usize, cap: usize) -> Result<Robustness> {
    let n = g.node_count();
    if r == 0 {
        return Err(GraphError::InvalidParameter("r must be positive".into()));
    }
    if s == 0 || s > n {
        return Err(GraphError::InvalidParameter(format!("s must lie in 1..={n}")));
    }
    let cap = cap.min(ABSOLUTE_CAP);
    if n > cap {
        return Err(GraphError::InstanceTooLarge { n, cap });
    }

    let masks = Masks::new(g);
    let full = masks.full();
    let table: Vec<u32> = (0..=full)
        .map(|set| reached_by(&masks, set, r) as u32)
        .collect();

    for v1 in 1..=full {
        let x1 = table[v1 as usize] as u64;
        if x1 == v1 {
            continue;
        }
        let comp = full & !v1;
        let mut v2 = comp;
        while v2 != 0 {
            let x2 = table[v2 as usize] as u64;
            if x2 != v2 && (x1.count_ones() + x2.count_ones()) < s as u32 {
                return Ok(Robustness {
                    robust: false,
                    witness: Some(RobustnessWitness {
                        subset_one: to_set(v1),
                        subset_two: to_set(v2),
                        reached_one: to_set(x1),
                        reached_two: to_set(x2),
                    }),
                });
            }
            v2 = (v2 - 1) & comp;
        }
    }
    Ok(Robustness {
        robust: true,
        witness: None,
    })
}

fn reached_by(masks: &Masks, set: u64, r: usize) -> u64 {
    let mut out = 0;
    let mut rest = set;
    while rest != 0 {
        let b = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (masks.inn[b] & !set).count_ones() as usize >= r {
            out |= 1 << b;
        }
    }
    out
}

fn to_set(mask: u64) -> BTreeSet<NodeId> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}
