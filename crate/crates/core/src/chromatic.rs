//! Recoloring bound via the uncolored pair graph A and the derived
//! undirected graph B.
//!
//! The construction breaks every same-colored non-intersecting closed-path
//! pair by force: enumerate the elementary cycles of A (all off-diagonal
//! node pairs, edges when both component edges exist), choose at least one
//! pair-node per cycle, and connect the two members of each chosen pair in
//! an undirected graph B over the original nodes.  Any proper coloring of B
//! then assigns the two members of a chosen pair different colors, so no
//! A-cycle survives into G² of the recolored graph — G² becomes acyclic,
//! and the number of colors used is an upper bound on what suffices.
//!
//! Cycle coverage treats a pair-node and its reverse as interchangeable:
//! coloring `{u, w}` differently kills cycles through `(u, w)` and `(w, u)`
//! alike.  The default selection is a greedy set cover on that basis.  B is
//! not unique; no minimality is claimed for the bound.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::auxiliary::{self, PairGraph, PairKind};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, NodeId};

/// Undirected graph over the source graph's nodes; one edge per selected
/// pair-node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BGraph {
    nodes: usize,
    edges: Vec<(NodeId, NodeId)>,
    adj: Vec<Vec<NodeId>>,
}

impl BGraph {
    fn new(nodes: usize, edge_set: &BTreeSet<(NodeId, NodeId)>) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for &(u, w) in edge_set {
            adj[u].push(w);
            adj[w].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        BGraph {
            nodes,
            edges: edge_set.iter().copied().collect(),
            adj,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Undirected edges, normalized as (smaller index, larger index).
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }
}

/// Result of [`chromatic_bound`].
#[derive(Debug, Clone, Serialize)]
pub struct ChromaticBound {
    /// Number of colors used by the greedy coloring of B.
    pub bound: usize,
    /// Selected pair-nodes, as source-node id pairs.
    pub selection: Vec<(String, String)>,
    /// Color index (0-based, palette `c0`, `c1`, …) per node id.
    pub coloring: BTreeMap<String, usize>,
    /// The source graph recolored accordingly; G² of this graph is acyclic.
    #[serde(skip)]
    pub recolored: ColoredGraph,
}

fn unordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True when the cycle (a list of A pair indices) contains `pair` in either
/// orientation.
fn cycle_covered_by(a: &PairGraph, cycle: &[usize], pair: (NodeId, NodeId)) -> bool {
    cycle.iter().any(|&idx| {
        let (x, y) = a.pairs()[idx];
        unordered(x, y) == pair
    })
}

/// Greedy set cover: repeatedly select the unordered node pair whose B-edge
/// breaks the most remaining uncovered A-cycles (ties: lexicographically
/// least pair).  Returns indices of pair-nodes in A, normalized to the
/// orientation (smaller, larger).
pub fn default_selection(a: &PairGraph, cycles: &[Vec<usize>]) -> Vec<usize> {
    let mut uncovered: Vec<&Vec<usize>> = cycles.iter().collect();
    let mut selection = Vec::new();
    while !uncovered.is_empty() {
        let mut counts: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
        for cycle in &uncovered {
            let pairs_in_cycle: BTreeSet<(NodeId, NodeId)> = cycle
                .iter()
                .map(|&idx| {
                    let (x, y) = a.pairs()[idx];
                    unordered(x, y)
                })
                .collect();
            for pair in pairs_in_cycle {
                *counts.entry(pair).or_insert(0) += 1;
            }
        }
        let (&best_pair, _) = counts
            .iter()
            .max_by(|(pa, ca), (pb, cb)| ca.cmp(cb).then_with(|| pb.cmp(pa)))
            .expect("uncovered cycles must contain pairs");
        selection.push(
            a.index_of(best_pair)
                .expect("A contains every off-diagonal pair"),
        );
        uncovered.retain(|cycle| !cycle_covered_by(a, cycle, best_pair));
    }
    selection
}

/// Builds B from an explicit selection of A pair-nodes, verifying that the
/// selection covers every elementary cycle of A (up to `budget` cycles).
pub fn build_b(
    graph: &ColoredGraph,
    a: &PairGraph,
    selection: &[usize],
    budget: usize,
) -> Result<BGraph> {
    assert_eq!(a.kind(), PairKind::AUncolored, "build_b expects an A graph");
    let chosen: BTreeSet<(NodeId, NodeId)> = selection
        .iter()
        .map(|&idx| {
            let (x, y) = a.pairs()[idx];
            unordered(x, y)
        })
        .collect();
    let cycles = a.elementary_cycles(budget)?;
    for cycle in &cycles {
        if !chosen.iter().any(|&pair| cycle_covered_by(a, cycle, pair)) {
            let readable: Vec<String> = cycle
                .iter()
                .map(|&idx| {
                    let (x, y) = a.pairs()[idx];
                    format!("({}, {})", graph.node_id(x), graph.node_id(y))
                })
                .collect();
            return Err(Error::InvalidInput(format!(
                "selection misses the A-cycle {}",
                readable.join(" -> ")
            )));
        }
    }
    Ok(BGraph::new(graph.node_count(), &chosen))
}

/// Greedy proper coloring of B: nodes in descending degree (ties by index),
/// each taking the smallest color unused among its already-colored
/// neighbors.  Returns one color index per node.
pub fn greedy_coloring(b: &BGraph) -> Vec<usize> {
    let mut order: Vec<NodeId> = (0..b.node_count()).collect();
    order.sort_by(|&x, &y| b.degree(y).cmp(&b.degree(x)).then_with(|| x.cmp(&y)));
    let mut colors = vec![usize::MAX; b.node_count()];
    for v in order {
        let used: BTreeSet<usize> = b
            .neighbors(v)
            .iter()
            .map(|&w| colors[w])
            .filter(|&c| c != usize::MAX)
            .collect();
        colors[v] = (0..).find(|c| !used.contains(c)).unwrap();
    }
    colors
}

/// Upper-bounds the number of colors sufficient for an acyclic G²: builds
/// A, covers its elementary cycles, colors B, recolors the graph, and
/// verifies the claim by rebuilding G².
pub fn chromatic_bound(graph: &ColoredGraph, budget: usize) -> Result<ChromaticBound> {
    let a = auxiliary::build_a(graph);
    let cycles = a.elementary_cycles(budget)?;
    let selection = default_selection(&a, &cycles);
    let b = build_b(graph, &a, &selection, budget)?;
    let coloring = greedy_coloring(&b);
    let bound = coloring.iter().max().map_or(0, |&c| c + 1).max(1);

    let mut doc = graph.to_doc();
    doc.palette = (0..bound).map(|i| format!("c{i}")).collect();
    for node in &mut doc.nodes {
        let v = graph.index_of(&node.id).expect("doc node exists in graph");
        node.colors = vec![format!("c{}", coloring[v])];
    }
    let recolored = doc.compile()?;
    if !auxiliary::build_g2(&recolored).is_acyclic() {
        return Err(Error::Internal(
            "recolored graph still has a cyclic G² despite full cycle cover".into(),
        ));
    }

    Ok(ChromaticBound {
        bound,
        selection: selection
            .iter()
            .map(|&idx| {
                let (x, y) = a.pairs()[idx];
                (graph.node_id(x).to_string(), graph.node_id(y).to_string())
            })
            .collect(),
        coloring: (0..graph.node_count())
            .map(|v| (graph.node_id(v).to_string(), coloring[v]))
            .collect(),
        recolored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auxiliary::DEFAULT_CYCLE_BUDGET;
    use crate::fixtures;

    fn three_cycle_same_color() -> ColoredGraph {
        ColoredGraph::build(
            &["Red"],
            &[("x", &["Red"]), ("y", &["Red"]), ("z", &["Red"])],
            &[("x", "y"), ("y", "z"), ("z", "x")],
            None,
        )
        .unwrap()
    }

    #[test]
    fn g_sym_bound_is_two_and_recolored_g2_is_acyclic() {
        let result = chromatic_bound(&fixtures::g_sym(), DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(result.bound, 2);
        assert!(auxiliary::build_g2(&result.recolored).is_acyclic());
        assert_eq!(result.recolored.palette(), &["c0".to_string(), "c1".to_string()]);
    }

    #[test]
    fn three_cycle_recolors_with_two_colors() {
        let result = chromatic_bound(&three_cycle_same_color(), DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(result.bound, 2);
        assert_eq!(result.selection, vec![("x".to_string(), "y".to_string())]);
        assert_eq!(result.coloring.get("x"), Some(&0));
        assert_eq!(result.coloring.get("y"), Some(&1));
        assert_eq!(result.coloring.get("z"), Some(&0));
        assert!(auxiliary::build_g2(&result.recolored).is_acyclic());
    }

    #[test]
    fn edgeless_graph_needs_one_color() {
        let g = ColoredGraph::build(
            &["Red"],
            &[("p", &["Red"]), ("q", &["Red"]), ("r", &["Red"])],
            &[],
            None,
        )
        .unwrap();
        let result = chromatic_bound(&g, DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(result.bound, 1);
        assert!(result.selection.is_empty());
    }

    #[test]
    fn acyclic_a_yields_empty_b() {
        let g = ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"]), ("c", &["Red"])],
            &[("a", "b"), ("b", "c")],
            None,
        )
        .unwrap();
        let a = auxiliary::build_a(&g);
        let cycles = a.elementary_cycles(DEFAULT_CYCLE_BUDGET).unwrap();
        assert!(cycles.is_empty());
        let b = build_b(&g, &a, &[], DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(b.edge_count(), 0);
        assert_eq!(chromatic_bound(&g, DEFAULT_CYCLE_BUDGET).unwrap().bound, 1);
    }

    #[test]
    fn triangle_selection_colors_with_three() {
        let g = three_cycle_same_color();
        let a = auxiliary::build_a(&g);
        let idx = |u: &str, w: &str| {
            a.index_of((g.index_of(u).unwrap(), g.index_of(w).unwrap()))
                .unwrap()
        };
        let selection = [idx("x", "y"), idx("y", "z"), idx("x", "z")];
        let b = build_b(&g, &a, &selection, DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(b.edge_count(), 3);
        let coloring = greedy_coloring(&b);
        assert_eq!(coloring.iter().max(), Some(&2));
        let distinct: BTreeSet<usize> = coloring.iter().copied().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn uncovered_cycle_is_rejected() {
        let g = three_cycle_same_color();
        let a = auxiliary::build_a(&g);
        let err = build_b(&g, &a, &[], DEFAULT_CYCLE_BUDGET).unwrap_err();
        assert!(err.to_string().contains("selection misses"));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // A complete 4-node digraph has far more than two A-cycles.
        let nodes: Vec<(&str, &[&str])> = vec![
            ("n0", &["Red"]),
            ("n1", &["Red"]),
            ("n2", &["Red"]),
            ("n3", &["Red"]),
        ];
        let mut edges = Vec::new();
        let ids = ["n0", "n1", "n2", "n3"];
        for u in ids {
            for w in ids {
                if u != w {
                    edges.push((u, w));
                }
            }
        }
        let g = ColoredGraph::build(&["Red"], &nodes, &edges, None).unwrap();
        assert!(matches!(chromatic_bound(&g, 2), Err(Error::Budget(_))));
    }

    #[test]
    fn two_cycle_bound() {
        let result = chromatic_bound(&fixtures::two_cycle(), DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(result.bound, 2);
        assert_eq!(result.selection, vec![("a".to_string(), "b".to_string())]);
    }
}
