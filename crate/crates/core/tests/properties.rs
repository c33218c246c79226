//! Property-based invariants over randomly generated graphs.
//!
//! Strategies produce a seed, and each case regenerates its graph from that
//! seed with the library's own small-graph generator, so failures shrink to
//! a single reproducible integer.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphtrack_core::auxiliary::{build_g2, build_g2_tilde, is_edge_superset};
use graphtrack_core::brute::gen_small_graph;
use graphtrack_core::insp::{build_insp_reduction, IndicatorColorMode, TriangleInstance};
use graphtrack_core::io;
use graphtrack_core::mitigation::{apply_indicators, IndicatorColor, IndicatorPlacement};
use graphtrack_core::pathology;
use graphtrack_core::reduce::{reduce_edge_colored, reduce_multicolor};
use graphtrack_core::taxonomy;
use graphtrack_core::{ColoredEdgeDoc, ColoredGraph, EdgeColoredGraph, EdgeGraphDoc};

fn graph_from_seed(seed: u64) -> ColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_small_graph(&mut rng, 6, 3)
}

/// Random edge-colored graph; every ordered pair carries an edge with
/// probability ~0.3, colored with one or two palette entries.
fn edge_graph_from_seed(seed: u64) -> EdgeColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=5);
    let k = rng.gen_range(1..=3);
    let palette: Vec<String> = (0..k).map(|i| format!("C{i}")).collect();
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(0.3) {
                let mut colors = vec![format!("C{}", rng.gen_range(0..k))];
                if k > 1 && rng.gen_bool(0.25) {
                    let extra = format!("C{}", rng.gen_range(0..k));
                    if !colors.contains(&extra) {
                        colors.push(extra);
                    }
                }
                edges.push(ColoredEdgeDoc {
                    from: nodes[u].clone(),
                    to: nodes[v].clone(),
                    colors,
                });
            }
        }
    }
    EdgeGraphDoc {
        palette,
        nodes,
        edges,
        start_nodes: None,
    }
    .compile()
    .expect("generated edge graph should be valid")
}

/// All emittable color-name strings of exactly `len` symbols, walks starting
/// anywhere (start sets are a tracking concern, not a language one).
fn node_language(graph: &ColoredGraph, len: usize) -> BTreeSet<Vec<String>> {
    fn extend(
        graph: &ColoredGraph,
        at: usize,
        word: &mut Vec<String>,
        len: usize,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        for color in graph.colors(at).iter() {
            word.push(graph.color_name(color).to_string());
            if word.len() == len {
                out.insert(word.clone());
            } else {
                for &w in graph.out_neighbors(at) {
                    extend(graph, w, word, len, out);
                }
            }
            word.pop();
        }
    }
    let mut out = BTreeSet::new();
    for v in graph.node_indices() {
        extend(graph, v, &mut Vec::new(), len, &mut out);
    }
    out
}

/// All edge-color words along walks of exactly `len` edges.
fn edge_language(graph: &EdgeColoredGraph, len: usize) -> BTreeSet<Vec<String>> {
    fn extend(
        graph: &EdgeColoredGraph,
        at: usize,
        word: &mut Vec<String>,
        len: usize,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        for &(to, colors) in graph.out_neighbors(at) {
            for color in colors.iter() {
                word.push(graph.color_name(color).to_string());
                if word.len() == len {
                    out.insert(word.clone());
                } else {
                    extend(graph, to, word, len, out);
                }
                word.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in graph.node_indices() {
        extend(graph, v, &mut Vec::new(), len, &mut out);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_preserves_the_graph(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let back = io::graph_from_json(&io::graph_to_json(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn dot_round_trip_preserves_the_graph(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let back = io::graph_from_dot(&io::graph_to_dot(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn g2_is_an_edge_subgraph_of_g2_tilde(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let g2 = build_g2(&g);
        let g2t = build_g2_tilde(&g);
        prop_assert!(is_edge_superset(&g2t, &g2));
        // And cyclicity can only be introduced, never removed, by the
        // extra edges.
        prop_assert!(g2t.is_acyclic() <= g2.is_acyclic());
    }

    #[test]
    fn classification_is_total_and_flag_consistent(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let c = taxonomy::classify(&g).unwrap();
        prop_assert_eq!(taxonomy::region_from_flags(&c.flags).unwrap(), c.region);
        prop_assert_eq!(c.flags.g2_acyclic, !c.flags.has_separated);
    }

    #[test]
    fn pathology_witnesses_validate_on_their_graph(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let report = pathology::full_report(&g).unwrap();
        for entry in &report.scon {
            let node = g.index_of(&entry.node).expect("scon node exists");
            let color = g.color_index(&entry.color).expect("scon color exists");
            prop_assert!(entry.neighbors.len() >= 2);
            for id in &entry.neighbors {
                let w = g.index_of(id).expect("scon neighbor exists");
                prop_assert!(g.out_neighbors(node).contains(&w));
                prop_assert!(g.colors(w).contains(color));
            }
        }
        if let Some(w) = &report.intersecting {
            w.validate(&g).unwrap();
        }
        if let Some(w) = &report.separated {
            w.validate(&g).unwrap();
        }
        for w in pathology::intersecting_witnesses(&g, 3) {
            w.validate(&g).unwrap();
            prop_assert!(w.is_intersecting());
        }
        for w in pathology::separated_witnesses(&g, 3) {
            w.validate(&g).unwrap();
            prop_assert!(w.is_separated());
        }
    }

    #[test]
    fn multicolor_reduction_preserves_the_node_language(seed in any::<u64>()) {
        let g = graph_from_seed(seed);
        let (reduced, provenance) = reduce_multicolor(&g).unwrap();
        for len in 1..=4 {
            prop_assert_eq!(node_language(&g, len), node_language(&reduced, len));
        }
        // Copies exist exactly for multi-colored nodes.
        for v in g.node_indices() {
            let copies = provenance.copies_of(g.node_id(v)).len();
            prop_assert_eq!(copies, g.colors(v).iter().count());
        }
    }

    #[test]
    fn edge_colored_reduction_shifts_the_language_by_one(seed in any::<u64>()) {
        let src = edge_graph_from_seed(seed);
        let (reduced, _) = reduce_edge_colored(&src).unwrap();
        for len in 1..=3 {
            let want = edge_language(&src, len);
            let got: BTreeSet<Vec<String>> = node_language(&reduced, len + 1)
                .into_iter()
                .map(|w| w[1..].to_vec())
                .collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn indicators_add_one_node_and_one_edge_each(
        seed in any::<u64>(),
        pick in any::<u64>(),
    ) {
        let g = graph_from_seed(seed);
        let mut edges = Vec::new();
        for v in g.node_indices() {
            for &w in g.out_neighbors(v) {
                edges.push((g.node_id(v).to_string(), g.node_id(w).to_string()));
            }
        }
        prop_assume!(!edges.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let chosen: Vec<(String, String)> = edges
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        prop_assume!(!chosen.is_empty());
        let placement = IndicatorPlacement::new(chosen, IndicatorColor::Fresh);
        let k = placement.chosen_edges.len();
        let mitigated = apply_indicators(&g, &placement).unwrap();
        prop_assert_eq!(mitigated.node_count(), g.node_count() + k);
        prop_assert_eq!(mitigated.edge_count(), g.edge_count() + k);
        // A fresh color joins the palette exactly once however many
        // indicators are placed.
        prop_assert_eq!(mitigated.palette().len(), g.palette().len() + 1);
    }

    #[test]
    fn insp_reduction_counts_candidates_and_ignores_color_mode(
        extra_nodes in 0usize..3,
        edge_bits in any::<u64>(),
    ) {
        // A guaranteed triangle plus random extra edges over a few more nodes.
        let mut names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        for i in 0..extra_nodes {
            names.push(format!("x{i}"));
        }
        let mut edges: Vec<(String, String)> = [("a", "b"), ("b", "c"), ("a", "c")]
            .iter()
            .map(|&(u, v)| (u.to_string(), v.to_string()))
            .collect();
        let all: Vec<(usize, usize)> = (0..names.len())
            .flat_map(|u| (u + 1..names.len()).map(move |v| (u, v)))
            .collect();
        for (bit, &(u, v)) in all.iter().enumerate() {
            if u < 3 && v < 3 {
                continue; // triangle edges are already present
            }
            if edge_bits >> bit & 1 == 1 {
                edges.push((names[u].clone(), names[v].clone()));
            }
        }
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let edge_refs: Vec<(&str, &str)> = edges
            .iter()
            .map(|(u, v)| (u.as_str(), v.as_str()))
            .collect();
        let instance = TriangleInstance::new(&name_refs, &edge_refs).unwrap();
        let fresh = build_insp_reduction(&instance, IndicatorColorMode::Fresh).unwrap();
        let existing = build_insp_reduction(&instance, IndicatorColorMode::Existing).unwrap();
        let s = instance.triangle_count();
        prop_assert_eq!(fresh.candidates.len(), 9 * s + edges.len());
        prop_assert_eq!(fresh.graph.palette(), ["white", "black"]);
        // The gadget itself does not depend on how indicators will be colored.
        prop_assert_eq!(
            serde_json::to_value(fresh.graph.to_doc()).unwrap(),
            serde_json::to_value(existing.graph.to_doc()).unwrap()
        );
        prop_assert_eq!(&fresh.candidates, &existing.candidates);
    }
}
