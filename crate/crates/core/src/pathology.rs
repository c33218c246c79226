//! Detection of the three structural pathologies, with witnesses.
//!
//! 1. **Same-colored out-neighbors** (SCON): a node with two or more
//!    out-neighbors able to emit a common color.  Reported per (node,
//!    color) with the offending neighbor set.
//! 2. **Intersecting cycles**: two distinct equal-length closed walks with
//!    the same color sequence that coincide at some position.  Detected via
//!    the product pair graph: present iff some SCC contains both a diagonal
//!    and an off-diagonal pair.  The witness walks are read off a closed
//!    walk through one pair of each kind.
//! 3. **Separated cycles**: two equal-length closed walks with the same
//!    color sequence that never coincide.  Present iff G² has a cycle; the
//!    witness is a G² cycle projected to its components.
//!
//! Detectors accept multi-colored graphs directly (color conditions are set
//! intersections), though the taxonomy semantics downstream are stated for
//! single-colored graphs.

use serde::Serialize;

use crate::auxiliary::{self, CycleWitness, PairGraph};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;

/// One same-colored-out-neighbors finding: `node` has ≥2 out-neighbors that
/// can all emit `color`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SconEntry {
    pub node: String,
    pub color: String,
    pub neighbors: Vec<String>,
}

/// Aggregated pathology findings for one graph.
#[derive(Debug, Clone, Serialize)]
pub struct PathologyReport {
    pub has_scon: bool,
    pub has_intersecting: bool,
    pub has_separated: bool,
    pub scon: Vec<SconEntry>,
    pub intersecting: Option<CycleWitness>,
    pub separated: Option<CycleWitness>,
}

/// Lists every (node, color) with at least two out-neighbors sharing that
/// color, in node order then palette order.
pub fn detect_scon(graph: &ColoredGraph) -> Vec<SconEntry> {
    let mut entries = Vec::new();
    for v in graph.node_indices() {
        for (color_idx, color) in graph.palette().iter().enumerate() {
            let neighbors: Vec<String> = graph
                .out_neighbors(v)
                .iter()
                .filter(|&&w| graph.colors(w).contains(color_idx))
                .map(|&w| graph.node_id(w).to_string())
                .collect();
            if neighbors.len() >= 2 {
                entries.push(SconEntry {
                    node: graph.node_id(v).to_string(),
                    color: color.clone(),
                    neighbors,
                });
            }
        }
    }
    entries
}

/// Returns a witness pair of intersecting cycles, if any exist.
pub fn detect_intersecting_cycles(graph: &ColoredGraph) -> Option<CycleWitness> {
    let product = auxiliary::build_product(graph);
    mixed_scc_witnesses(graph, &product, 1).pop()
}

/// Up to `max` intersecting-cycle witnesses, one per qualifying product SCC.
pub fn intersecting_witnesses(graph: &ColoredGraph, max: usize) -> Vec<CycleWitness> {
    let product = auxiliary::build_product(graph);
    mixed_scc_witnesses(graph, &product, max)
}

fn mixed_scc_witnesses(
    graph: &ColoredGraph,
    product: &PairGraph,
    max: usize,
) -> Vec<CycleWitness> {
    let mut witnesses = Vec::new();
    for scc in product.sccs() {
        if witnesses.len() >= max {
            break;
        }
        let diagonal = scc.iter().copied().find(|&i| {
            let (a, b) = product.pair(i);
            a == b
        });
        let off_diagonal = scc.iter().copied().find(|&i| {
            let (a, b) = product.pair(i);
            a != b
        });
        let (Some(diag), Some(off)) = (diagonal, off_diagonal) else {
            continue;
        };
        // Closed walk diag -> off -> diag inside the SCC; both legs exist by
        // strong connectivity.
        let forward = scc_path(product, &scc, diag, off);
        let back = scc_path(product, &scc, off, diag);
        let mut cycle = forward;
        cycle.extend_from_slice(&back[1..back.len() - 1]);
        witnesses.push(CycleWitness::from_pair_cycle(graph, product, &cycle, Some(0)));
    }
    witnesses
}

/// BFS path between two pair nodes restricted to one SCC (inclusive ends).
fn scc_path(pg: &PairGraph, scc: &[usize], from: usize, to: usize) -> Vec<usize> {
    use std::collections::VecDeque;
    let mut prev = vec![usize::MAX; pg.pair_count()];
    let mut queue = VecDeque::new();
    queue.push_back(from);
    prev[from] = from;
    while let Some(v) = queue.pop_front() {
        if v == to && v != from {
            break;
        }
        for &w in pg.neighbors(v) {
            if scc.binary_search(&w).is_ok() && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    assert_ne!(prev[to], usize::MAX, "SCC members must be mutually reachable");
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Returns a witness pair of separated cycles, if any exist.
pub fn detect_separated_cycles(graph: &ColoredGraph) -> Option<CycleWitness> {
    let g2 = auxiliary::build_g2(graph);
    g2.find_cycle()
        .map(|cycle| CycleWitness::from_pair_cycle(graph, &g2, &cycle, None))
}

/// Up to `max` separated-cycle witnesses from distinct elementary G² cycles.
pub fn separated_witnesses(graph: &ColoredGraph, max: usize) -> Vec<CycleWitness> {
    let g2 = auxiliary::build_g2(graph);
    let adj: Vec<Vec<usize>> = (0..g2.pair_count())
        .map(|i| g2.neighbors(i).to_vec())
        .collect();
    let (cycles, _) = auxiliary::elementary_cycles_capped(&adj, max);
    cycles
        .iter()
        .map(|cycle| CycleWitness::from_pair_cycle(graph, &g2, cycle, None))
        .collect()
}

/// Runs all three detectors and checks the structural implication
/// "intersecting present ⇒ SCON present".
pub fn full_report(graph: &ColoredGraph) -> Result<PathologyReport> {
    let scon = detect_scon(graph);
    let intersecting = detect_intersecting_cycles(graph);
    let separated = detect_separated_cycles(graph);
    if intersecting.is_some() && scon.is_empty() {
        return Err(Error::Internal(
            "intersecting cycles found on a graph without same-colored out-neighbors".into(),
        ));
    }
    if let Some(w) = &intersecting {
        if !w.is_intersecting() {
            return Err(Error::Internal("intersecting witness malformed".into()));
        }
    }
    if let Some(w) = &separated {
        if !w.is_separated() {
            return Err(Error::Internal("separated witness malformed".into()));
        }
    }
    Ok(PathologyReport {
        has_scon: !scon.is_empty(),
        has_intersecting: intersecting.is_some(),
        has_separated: separated.is_some(),
        scon,
        intersecting,
        separated,
    })
}
