//! Reductions to the single-colored node form.
//!
//! All downstream analyses assume a node-colored graph in which every node
//! carries exactly one color.  Two reductions establish that form:
//!
//! - [`reduce_multicolor`] splits each node with `k > 1` colors into `k`
//!   single-colored copies named `<id>__<color>`, each inheriting all in- and
//!   out-edges of the original.  Single-colored nodes are left untouched, so
//!   the reduction is the identity on already-single-colored graphs.
//! - [`reduce_edge_colored`] converts an edge-colored graph by giving every
//!   node one copy per distinct incoming edge color (named `<id>__<color>`),
//!   colored by that incoming color.  A multi-colored edge acts as parallel
//!   single-colored intents, one per color.  Nodes with no incoming edges
//!   keep their id and receive the reserved color [`RESERVED_SOURCE_COLOR`],
//!   which makes their emission vacuous while preserving them.
//!
//! Both reductions report a [`Provenance`] mapping every output node id back
//! to its source node id.  A generated copy name colliding with an existing
//! node id surfaces as a duplicate-node validation error.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{
    ColoredGraph, EdgeColoredGraph, EdgeDoc, GraphDoc, NodeDoc,
};

/// Palette color assigned to in-degree-0 nodes by [`reduce_edge_colored`].
pub const RESERVED_SOURCE_COLOR: &str = "__source__";

/// Maps each node of a reduced graph back to the node it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// Output node id → source node id.
    pub source_of: BTreeMap<String, String>,
}

impl Provenance {
    /// All output copies of `source`, in sorted order.
    pub fn copies_of(&self, source: &str) -> Vec<&str> {
        self.source_of
            .iter()
            .filter(|(_, src)| src.as_str() == source)
            .map(|(out, _)| out.as_str())
            .collect()
    }

    /// True when every node maps to itself.
    pub fn is_identity(&self) -> bool {
        self.source_of.iter().all(|(out, src)| out == src)
    }
}

/// Splits multi-colored nodes into single-colored copies.
pub fn reduce_multicolor(graph: &ColoredGraph) -> Result<(ColoredGraph, Provenance)> {
    // Copy names per source node; single-colored nodes keep their own id.
    let mut copies: Vec<Vec<(String, usize)>> = Vec::with_capacity(graph.node_count());
    for v in graph.node_indices() {
        let colors = graph.colors(v);
        if colors.len() == 1 {
            copies.push(vec![(graph.node_id(v).to_string(), colors.single())]);
        } else {
            copies.push(
                colors
                    .iter()
                    .map(|c| (format!("{}__{}", graph.node_id(v), graph.color_name(c)), c))
                    .collect(),
            );
        }
    }

    let mut nodes = Vec::new();
    let mut source_of = BTreeMap::new();
    for v in graph.node_indices() {
        for (name, color) in &copies[v] {
            nodes.push(NodeDoc {
                id: name.clone(),
                colors: vec![graph.color_name(*color).to_string()],
            });
            source_of.insert(name.clone(), graph.node_id(v).to_string());
        }
    }

    let mut edges = Vec::new();
    for &(u, v) in graph.edges() {
        for (u_name, _) in &copies[u] {
            for (v_name, _) in &copies[v] {
                edges.push(EdgeDoc {
                    from: u_name.clone(),
                    to: v_name.clone(),
                });
            }
        }
    }

    let start_nodes = graph.start_nodes().map(|starts| {
        starts
            .iter()
            .flat_map(|&v| copies[v].iter().map(|(name, _)| name.clone()))
            .collect()
    });

    let doc = GraphDoc {
        palette: graph.palette().to_vec(),
        nodes,
        edges,
        start_nodes,
    };
    Ok((doc.compile()?, Provenance { source_of }))
}

/// Converts an edge-colored graph to an equivalent node-colored graph.
pub fn reduce_edge_colored(graph: &EdgeColoredGraph) -> Result<(ColoredGraph, Provenance)> {
    if graph
        .palette()
        .iter()
        .any(|c| c == RESERVED_SOURCE_COLOR)
    {
        return Err(Error::InvalidInput(format!(
            "palette contains reserved color {RESERVED_SOURCE_COLOR}"
        )));
    }

    // Distinct incoming colors per node, ascending by palette index.
    let mut incoming_colors: Vec<Vec<usize>> = vec![Vec::new(); graph.node_count()];
    for v in graph.node_indices() {
        let mut set = crate::graph::ColorSet::EMPTY;
        for &(_, colors) in graph.in_neighbors(v) {
            set = set.union(colors);
        }
        incoming_colors[v] = set.iter().collect();
    }

    let needs_source = incoming_colors.iter().any(|c| c.is_empty());
    let mut palette: Vec<String> = graph.palette().to_vec();
    if needs_source {
        palette.push(RESERVED_SOURCE_COLOR.to_string());
    }

    // Copy name per (node, incoming color); source nodes keep their id.
    let copy_name = |v: usize, color: usize| -> String {
        format!("{}__{}", graph.node_id(v), graph.palette()[color])
    };

    let mut nodes = Vec::new();
    let mut source_of = BTreeMap::new();
    for v in graph.node_indices() {
        if incoming_colors[v].is_empty() {
            nodes.push(NodeDoc {
                id: graph.node_id(v).to_string(),
                colors: vec![RESERVED_SOURCE_COLOR.to_string()],
            });
            source_of.insert(graph.node_id(v).to_string(), graph.node_id(v).to_string());
        } else {
            for &c in &incoming_colors[v] {
                let name = copy_name(v, c);
                nodes.push(NodeDoc {
                    id: name.clone(),
                    colors: vec![graph.palette()[c].to_string()],
                });
                source_of.insert(name, graph.node_id(v).to_string());
            }
        }
    }

    let copies = |v: usize| -> Vec<String> {
        if incoming_colors[v].is_empty() {
            vec![graph.node_id(v).to_string()]
        } else {
            incoming_colors[v].iter().map(|&c| copy_name(v, c)).collect()
        }
    };

    let mut edges = Vec::new();
    for &(u, v, colors) in graph.edges() {
        for c in colors.iter() {
            let target = copy_name(v, c);
            for from in copies(u) {
                edges.push(EdgeDoc {
                    from,
                    to: target.clone(),
                });
            }
        }
    }

    let start_nodes = graph
        .start_nodes()
        .map(|starts| starts.iter().flat_map(|&v| copies(v)).collect());

    let doc = GraphDoc {
        palette,
        nodes,
        edges,
        start_nodes,
    };
    Ok((doc.compile()?, Provenance { source_of }))
}
