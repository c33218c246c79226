//! Hard-instance generator for the indicator selection problem.
//!
//! Deciding whether indicators on a candidate edge set can make a graph
//! partly a posteriori observable is NP-complete.  The reduction here turns
//! a *Monochromatic Triangle* instance — can the edges of an undirected
//! graph be 2-colored so that no triangle ends up monochromatic? — into an
//! equivalent indicator-selection instance, in four steps:
//!
//! 1. For every triangle, a trio of copy nodes; for every edge of the
//!    source graph, a tail → head "real edge" pair.  Each copy points at the
//!    tails of its triangle's three edges ("connector" edges).
//! 2. The connector and real edges together form the candidate set `F`.
//!    Placing an indicator on a real edge stands for coloring the source
//!    edge; if a triangle's three real edges are all treated alike, two of
//!    the nine copy-to-head paths are indistinguishable no matter how the
//!    connectors are set, and those two paths close into a separated cycle
//!    pair.
//! 3. Three copies of a uniform-depth binary tree (left children black,
//!    right children white) address the triangles: the root-to-leaf color
//!    sequence spells out which triangle a walk is entering, but not which
//!    of the three copies.
//! 4. Two linear arrays — `2S+7` white nodes then `2S+7` black nodes for
//!    `S` triangles — return every real-edge head to all three tree roots.
//!    The long black run is unmistakable in any color sequence, which pins
//!    walk alignment and makes the gadget's path-distinguishability exactly
//!    the partly-a-posteriori-observable question.
//!
//! [`monochromatic_triangle_oracle`] answers the source question by brute
//! force so the equivalence can be checked empirically on small instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeDoc, GraphDoc, NodeDoc};
use crate::mitigation::IndicatorColor;

/// Largest edge set the oracle will enumerate (2^|E| colorings).
pub const ORACLE_EDGE_LIMIT: usize = 24;

/// An undirected graph together with its enumerated triangles.
///
/// The triangle list is computed by the constructor, so it is always
/// exactly the set of 3-cliques, in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleInstance {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    triangles: Vec<[String; 3]>,
}

impl TriangleInstance {
    /// Builds an instance from named nodes and undirected edges.  Edges are
    /// normalized to `(min, max)` order and deduplicated; self-loops and
    /// unknown endpoints are rejected.
    pub fn new(nodes: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut node_list: Vec<String> = nodes.iter().map(|s| s.to_string()).collect();
        node_list.sort();
        node_list.dedup();
        if node_list.len() != nodes.len() {
            return Err(Error::InvalidInput("duplicate node in instance".into()));
        }
        let mut edge_list = Vec::new();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop on node {u:?}")));
            }
            if !node_list.iter().any(|n| n == u) || !node_list.iter().any(|n| n == v) {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) names an unknown node"
                )));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            edge_list.push((a.to_string(), b.to_string()));
        }
        edge_list.sort();
        edge_list.dedup();
        let has = |a: &str, b: &str| {
            let key = if a < b { (a, b) } else { (b, a) };
            edge_list
                .iter()
                .any(|(x, y)| (x.as_str(), y.as_str()) == key)
        };
        let mut triangles = Vec::new();
        for i in 0..node_list.len() {
            for j in i + 1..node_list.len() {
                for k in j + 1..node_list.len() {
                    let (a, b, c) = (&node_list[i], &node_list[j], &node_list[k]);
                    if has(a, b) && has(a, c) && has(b, c) {
                        triangles.push([a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
        }
        Ok(TriangleInstance {
            nodes: node_list,
            edges: edge_list,
            triangles,
        })
    }

    /// The complete graph on `n` nodes `v1 … vn`.
    pub fn complete(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((refs[i], refs[j]));
            }
        }
        TriangleInstance::new(&refs, &edges).expect("complete graph is always valid")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[String; 3]] {
        &self.triangles
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// The three normalized edges of triangle `t`.
    fn triangle_edges(t: &[String; 3]) -> [(String, String); 3] {
        [
            (t[0].clone(), t[1].clone()),
            (t[0].clone(), t[2].clone()),
            (t[1].clone(), t[2].clone()),
        ]
    }
}

/// True iff some 2-coloring of the instance's edges leaves no triangle
/// monochromatic, by exhaustive enumeration.
pub fn monochromatic_triangle_oracle(instance: &TriangleInstance) -> Result<bool> {
    let m = instance.edges.len();
    if m > ORACLE_EDGE_LIMIT {
        return Err(Error::InvalidInput(format!(
            "instance has {m} edges; the exhaustive oracle handles at most {ORACLE_EDGE_LIMIT}"
        )));
    }
    let edge_index = |a: &str, b: &str| -> usize {
        let key = if a < b { (a, b) } else { (b, a) };
        instance
            .edges
            .iter()
            .position(|(x, y)| (x.as_str(), y.as_str()) == key)
            .expect("triangle edges are instance edges")
    };
    let tri_edges: Vec<[usize; 3]> = instance
        .triangles
        .iter()
        .map(|t| {
            [
                edge_index(&t[0], &t[1]),
                edge_index(&t[0], &t[2]),
                edge_index(&t[1], &t[2]),
            ]
        })
        .collect();
    for mask in 0u32..(1u32 << m) {
        let good = tri_edges.iter().all(|&[a, b, c]| {
            let (ca, cb, cc) = (mask >> a & 1, mask >> b & 1, mask >> c & 1);
            !(ca == cb && cb == cc)
        });
        if good {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether reduction instances should aim indicators at an existing palette
/// color or the dedicated fresh one.  Feasibility is the same either way;
/// the switch exists so that claim can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorColorMode {
    Existing,
    Fresh,
}

/// Output of [`build_insp_reduction`]: the constructed graph, the candidate
/// edge set `F`, and the indicator color the solver should use on it.
#[derive(Debug, Clone)]
pub struct InspReduction {
    pub graph: ColoredGraph,
    pub candidates: Vec<(String, String)>,
    pub indicator_color: IndicatorColor,
}

/// Number of white (and of black) nodes in each linear array.
pub fn array_run_length(triangle_count: usize) -> usize {
    2 * triangle_count + 7
}

/// Uniform depth of the addressing trees.
pub fn tree_depth(triangle_count: usize) -> usize {
    usize::BITS as usize - (triangle_count - 1).leading_zeros() as usize
}

/// Constructs the indicator-selection instance equivalent to the given
/// Monochromatic Triangle instance.
///
/// Indicators chosen from the returned candidate set can make the graph
/// partly a posteriori observable iff the source instance admits a valid
/// 2-coloring.  The graph itself is identical under both color modes; only
/// the recommended indicator color differs.
pub fn build_insp_reduction(
    instance: &TriangleInstance,
    mode: IndicatorColorMode,
) -> Result<InspReduction> {
    let s = instance.triangle_count();
    if s == 0 {
        return Err(Error::InvalidInput(
            "instance has no triangles; the reduction needs at least one".into(),
        ));
    }
    let depth = tree_depth(s);
    let run = array_run_length(s);

    let mut nodes: Vec<NodeDoc> = Vec::new();
    let mut edges: Vec<EdgeDoc> = Vec::new();
    let mut candidates: Vec<(String, String)> = Vec::new();
    let node = |nodes: &mut Vec<NodeDoc>, id: String, color: &str| {
        nodes.push(NodeDoc {
            id,
            colors: vec![color.to_string()],
        });
    };
    let edge = |edges: &mut Vec<EdgeDoc>, from: String, to: String| {
        edges.push(EdgeDoc { from, to });
    };
    let tail = |u: &str, v: &str| format!("e_{u}_{v}_tail");
    let head = |u: &str, v: &str| format!("e_{u}_{v}_head");
    let copy = |i: usize, j: usize| format!("t{i}_{j}");
    let tree_node = |k: usize, level: usize, pos: usize| format!("tree{k}_{level}_{pos}");

    // Step 1: real-edge pairs for every source edge, tails black and heads
    // white so a crossing emits a fixed two-color signature.
    for (u, v) in &instance.edges {
        node(&mut nodes, tail(u, v), "black");
        node(&mut nodes, head(u, v), "white");
        edge(&mut edges, tail(u, v), head(u, v));
        candidates.push((tail(u, v), head(u, v)));
    }

    // Steps 1–2: three copy nodes per triangle, each pointing at the tails
    // of the triangle's three edges (the connector edges).
    for (i, t) in instance.triangles.iter().enumerate() {
        for j in 1..=3 {
            let c = copy(i + 1, j);
            node(&mut nodes, c.clone(), "white");
            for (u, v) in TriangleInstance::triangle_edges(t) {
                edge(&mut edges, c.clone(), tail(&u, &v));
                candidates.push((c.clone(), tail(&u, &v)));
            }
        }
    }

    // Step 3: three addressing trees of uniform depth; left children black,
    // right children white.  Leaf `i` of tree `k` feeds triangle copy
    // `t{i+1}_{k}`; subtrees holding no used leaf are omitted.
    let used = |level: usize, pos: usize| -> bool {
        let width = 1usize << (depth - level);
        pos * width < s
    };
    for k in 1..=3 {
        for level in 0..=depth {
            for pos in 0..(1usize << level) {
                if !used(level, pos) {
                    continue;
                }
                let color = if level == 0 {
                    "white"
                } else if pos % 2 == 0 {
                    "black"
                } else {
                    "white"
                };
                node(&mut nodes, tree_node(k, level, pos), color);
                if level < depth {
                    for child in [2 * pos, 2 * pos + 1] {
                        if used(level + 1, child) {
                            edge(
                                &mut edges,
                                tree_node(k, level, pos),
                                tree_node(k, level + 1, child),
                            );
                        }
                    }
                } else {
                    edge(&mut edges, tree_node(k, level, pos), copy(pos + 1, k));
                }
            }
        }
    }

    // Step 4: two linear arrays, `2S+7` whites then `2S+7` blacks, linking
    // every real-edge head back to all three tree roots.
    for m in 1..=2 {
        for i in 1..=run {
            node(&mut nodes, format!("arr{m}_w_{i}"), "white");
            if i > 1 {
                edge(
                    &mut edges,
                    format!("arr{m}_w_{}", i - 1),
                    format!("arr{m}_w_{i}"),
                );
            }
        }
        for i in 1..=run {
            node(&mut nodes, format!("arr{m}_b_{i}"), "black");
            let prev = if i == 1 {
                format!("arr{m}_w_{run}")
            } else {
                format!("arr{m}_b_{}", i - 1)
            };
            edge(&mut edges, prev, format!("arr{m}_b_{i}"));
        }
        for (u, v) in &instance.edges {
            edge(&mut edges, head(u, v), format!("arr{m}_w_1"));
        }
        for k in 1..=3 {
            edge(&mut edges, format!("arr{m}_b_{run}"), tree_node(k, 0, 0));
        }
    }

    let doc = GraphDoc {
        palette: vec!["white".to_string(), "black".to_string()],
        nodes,
        edges,
        start_nodes: None,
    };
    let graph = doc.compile()?;
    candidates.sort();
    let indicator_color = match mode {
        IndicatorColorMode::Existing => IndicatorColor::Existing("white".to_string()),
        IndicatorColorMode::Fresh => IndicatorColor::Fresh,
    };
    Ok(InspReduction {
        graph,
        candidates,
        indicator_color,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auxiliary;
    use crate::mitigation::{
        apply_indicators, solve_insp_exact, IndicatorPlacement, TargetClass,
    };

    fn single_triangle() -> TriangleInstance {
        TriangleInstance::new(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")]).unwrap()
    }

    fn shared_edge_pair() -> TriangleInstance {
        TriangleInstance::new(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("1", "3"), ("2", "3"), ("1", "4"), ("3", "4")],
        )
        .unwrap()
    }

    #[test]
    fn triangle_enumeration_finds_exactly_the_three_cliques() {
        let t = single_triangle();
        assert_eq!(t.triangles(), &[["a", "b", "c"]]);
        let pair = shared_edge_pair();
        assert_eq!(
            pair.triangles(),
            &[
                ["1".to_string(), "2".to_string(), "3".to_string()],
                ["1".to_string(), "3".to_string(), "4".to_string()],
            ]
        );
        assert_eq!(TriangleInstance::complete(6).triangle_count(), 20);
        let free = TriangleInstance::new(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        assert_eq!(free.triangle_count(), 0);
        assert!(TriangleInstance::new(&["a"], &[("a", "a")]).is_err());
        assert!(TriangleInstance::new(&["a"], &[("a", "b")]).is_err());
    }

    #[test]
    fn oracle_small_instances() {
        assert!(monochromatic_triangle_oracle(&single_triangle()).unwrap());
        let free = TriangleInstance::new(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        assert!(monochromatic_triangle_oracle(&free).unwrap());
        assert!(monochromatic_triangle_oracle(&shared_edge_pair()).unwrap());
    }

    #[test]
    fn oracle_k6_is_infeasible() {
        // Any 2-coloring of K6's 15 edges contains a monochromatic triangle.
        assert!(!monochromatic_triangle_oracle(&TriangleInstance::complete(6)).unwrap());
    }

    #[test]
    fn oracle_refuses_oversized_instances() {
        // K8 has 28 edges, past the 2^|E| enumeration limit.
        assert!(monochromatic_triangle_oracle(&TriangleInstance::complete(8)).is_err());
    }

    #[test]
    fn single_triangle_reduction_counts() {
        let reduction = build_insp_reduction(&single_triangle(), IndicatorColorMode::Fresh).unwrap();
        let g = &reduction.graph;
        // 3 copies + 3 real pairs (6) + 3 depth-0 trees + 2 arrays of 18.
        assert_eq!(g.node_count(), 48);
        // 9 connectors + 3 real + 3 leaf wires + 34 array links
        // + 6 head-to-array + 6 array-to-root.
        assert_eq!(g.edge_count(), 61);
        assert_eq!(reduction.candidates.len(), 12);
        let connectors = reduction
            .candidates
            .iter()
            .filter(|(u, _)| u.starts_with('t'))
            .count();
        assert_eq!(connectors, 9);
        // Every head feeds both arrays; both arrays feed all three roots.
        let head = g.index_of("e_a_b_head").unwrap();
        let outs: Vec<&str> = g
            .out_neighbors(head)
            .iter()
            .map(|&v| g.node_id(v))
            .collect();
        assert_eq!(outs, vec!["arr1_w_1", "arr2_w_1"]);
        let end = g.index_of("arr2_b_9").unwrap();
        let outs: Vec<&str> = g.out_neighbors(end).iter().map(|&v| g.node_id(v)).collect();
        assert_eq!(outs, vec!["tree1_0_0", "tree2_0_0", "tree3_0_0"]);
        assert_eq!(array_run_length(1), 9);
        assert_eq!(tree_depth(1), 0);
    }

    #[test]
    fn reduction_graph_is_identical_under_both_color_modes() {
        let fresh = build_insp_reduction(&single_triangle(), IndicatorColorMode::Fresh).unwrap();
        let existing =
            build_insp_reduction(&single_triangle(), IndicatorColorMode::Existing).unwrap();
        assert_eq!(fresh.graph.to_doc(), existing.graph.to_doc());
        assert_eq!(fresh.candidates, existing.candidates);
        assert_eq!(fresh.indicator_color, IndicatorColor::Fresh);
        assert_eq!(
            existing.indicator_color,
            IndicatorColor::Existing("white".into())
        );
    }

    #[test]
    fn shared_edge_reduction_shares_the_real_pair() {
        let reduction =
            build_insp_reduction(&shared_edge_pair(), IndicatorColorMode::Fresh).unwrap();
        let g = &reduction.graph;
        // One real pair per source edge — the shared edge (1,3) appears once
        // and receives connector edges from both triangles' copies.
        let shared_tail = g.index_of("e_1_3_tail").unwrap();
        let feeders: Vec<&str> = g
            .in_neighbors(shared_tail)
            .iter()
            .map(|&v| g.node_id(v))
            .collect();
        assert_eq!(feeders, vec!["t1_1", "t1_2", "t1_3", "t2_1", "t2_2", "t2_3"]);
        // 6 copies + 10 real nodes + 3 trees of 3 + 2 arrays of 22.
        assert_eq!(tree_depth(2), 1);
        assert_eq!(array_run_length(2), 11);
        assert_eq!(g.node_count(), 6 + 10 + 9 + 44);
        assert_eq!(g.edge_count(), 18 + 5 + 6 + 6 + 42 + 10 + 6);
        assert_eq!(reduction.candidates.len(), 23);
    }

    #[test]
    fn unused_tree_leaves_are_pruned() {
        let instance = TriangleInstance::new(
            &["1", "2", "3", "4", "5"],
            &[
                ("1", "2"),
                ("1", "3"),
                ("2", "3"),
                ("1", "4"),
                ("3", "4"),
                ("3", "5"),
                ("4", "5"),
            ],
        )
        .unwrap();
        assert_eq!(instance.triangle_count(), 3);
        let reduction = build_insp_reduction(&instance, IndicatorColorMode::Fresh).unwrap();
        let g = &reduction.graph;
        // Depth 2 with three used leaves: position 3 and its subtree vanish.
        assert_eq!(tree_depth(3), 2);
        assert!(g.index_of("tree1_2_0").is_some());
        assert!(g.index_of("tree1_2_2").is_some());
        assert!(g.index_of("tree1_2_3").is_none());
        let half = g.index_of("tree1_1_1").unwrap();
        assert_eq!(g.out_degree(half), 1);
    }

    #[test]
    fn reduction_rejects_triangle_free_instances() {
        let free = TriangleInstance::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(build_insp_reduction(&free, IndicatorColorMode::Fresh).is_err());
    }

    #[test]
    fn gadget_feasibility_tracks_real_edge_patterns() {
        // Treating all three real edges alike leaves two indistinguishable
        // copy-to-head paths and hence a separated cycle pair; making one
        // real edge differ and dedicating one connector column restores
        // distinguishability.
        let reduction = build_insp_reduction(&single_triangle(), IndicatorColorMode::Fresh).unwrap();
        let g = &reduction.graph;
        assert!(!auxiliary::build_g2(g).is_acyclic());

        let all_real = IndicatorPlacement::new(
            vec![
                ("e_a_b_tail".into(), "e_a_b_head".into()),
                ("e_a_c_tail".into(), "e_a_c_head".into()),
                ("e_b_c_tail".into(), "e_b_c_head".into()),
            ],
            IndicatorColor::Fresh,
        );
        let mitigated = apply_indicators(g, &all_real).unwrap();
        assert!(!auxiliary::build_g2(&mitigated).is_acyclic());

        let good = IndicatorPlacement::new(
            vec![
                ("e_a_b_tail".into(), "e_a_b_head".into()),
                ("t1_1".into(), "e_a_c_tail".into()),
                ("t1_2".into(), "e_a_c_tail".into()),
                ("t1_3".into(), "e_a_c_tail".into()),
            ],
            IndicatorColor::Fresh,
        );
        let mitigated = apply_indicators(g, &good).unwrap();
        assert!(auxiliary::build_g2(&mitigated).is_acyclic());
    }

    #[test]
    fn shared_edge_reduction_admits_a_hand_built_solution() {
        // Indicator on the shared real edge plus one connector column per
        // triangle distinguishes all copy-to-head paths in both gadgets.
        let reduction =
            build_insp_reduction(&shared_edge_pair(), IndicatorColorMode::Fresh).unwrap();
        let g = &reduction.graph;
        assert!(!auxiliary::build_g2(g).is_acyclic());
        let placement = IndicatorPlacement::new(
            vec![
                ("e_1_3_tail".into(), "e_1_3_head".into()),
                ("t1_1".into(), "e_1_2_tail".into()),
                ("t1_2".into(), "e_1_2_tail".into()),
                ("t1_3".into(), "e_1_2_tail".into()),
                ("t2_1".into(), "e_1_4_tail".into()),
                ("t2_2".into(), "e_1_4_tail".into()),
                ("t2_3".into(), "e_1_4_tail".into()),
            ],
            IndicatorColor::Fresh,
        );
        let mitigated = apply_indicators(g, &placement).unwrap();
        assert!(auxiliary::build_g2(&mitigated).is_acyclic());
    }

    #[test]
    fn exact_solver_agrees_with_oracle_on_the_single_triangle() {
        // The oracle says the lone triangle is 2-colorable, so the reduction
        // must admit a placement; the minimum is one real edge plus a full
        // connector column aimed at a different edge.
        let instance = single_triangle();
        assert!(monochromatic_triangle_oracle(&instance).unwrap());
        let reduction = build_insp_reduction(&instance, IndicatorColorMode::Fresh).unwrap();
        let placement = solve_insp_exact(
            &reduction.graph,
            &reduction.candidates,
            TargetClass::PartlyAPosterioriObservable,
            reduction.indicator_color.clone(),
            None,
        )
        .unwrap()
        .expect("feasible instance must have a placement");
        assert_eq!(
            placement.chosen_edges,
            vec![
                ("e_a_b_tail".to_string(), "e_a_b_head".to_string()),
                ("t1_1".to_string(), "e_a_c_tail".to_string()),
                ("t1_2".to_string(), "e_a_c_tail".to_string()),
                ("t1_3".to_string(), "e_a_c_tail".to_string()),
            ]
        );
    }

    #[test]
    fn real_edges_alone_cannot_fix_the_gadget() {
        // Restricting the candidates to the three real edges makes the
        // instance infeasible: three binary markings cannot be pairwise
        // distinct, so the solver correctly reports absence.
        let reduction = build_insp_reduction(&single_triangle(), IndicatorColorMode::Fresh).unwrap();
        let reals: Vec<(String, String)> = reduction
            .candidates
            .iter()
            .filter(|(u, _)| u.starts_with("e_"))
            .cloned()
            .collect();
        assert_eq!(reals.len(), 3);
        let out = solve_insp_exact(
            &reduction.graph,
            &reals,
            TargetClass::PartlyAPosterioriObservable,
            IndicatorColor::Fresh,
            None,
        )
        .unwrap();
        assert!(out.is_none());
    }
}
