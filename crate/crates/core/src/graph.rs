//! Core data model: node-colored and edge-colored directed graphs.
//!
//! A node-colored graph assigns every node a non-empty set of colors drawn
//! from a shared palette.  An edge-colored graph assigns the color sets to
//! edges instead.  Both are described on disk by plain serde documents
//! ([`GraphDoc`], [`EdgeGraphDoc`]); the compiled forms ([`ColoredGraph`],
//! [`EdgeColoredGraph`]) are validated at construction and keep nodes and
//! edges in a canonical sorted order so that structural equality and
//! serialization are deterministic.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Node index into a compiled graph's node table.
pub type NodeId = usize;

/// Maximum number of palette colors supported by the bitmask representation.
pub const MAX_COLORS: usize = 64;

/// A set of palette color indices, stored as a 64-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn singleton(color: usize) -> Self {
        debug_assert!(color < MAX_COLORS);
        ColorSet(1u64 << color)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut set = ColorSet::EMPTY;
        for idx in indices {
            set.insert(idx);
        }
        set
    }

    pub fn insert(&mut self, color: usize) {
        debug_assert!(color < MAX_COLORS);
        self.0 |= 1u64 << color;
    }

    pub fn contains(self, color: usize) -> bool {
        color < MAX_COLORS && self.0 & (1u64 << color) != 0
    }

    pub fn intersects(self, other: ColorSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn intersection(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Iterates the contained color indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let idx = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(idx)
            }
        })
    }

    /// The sole contained color; panics if the set is not a singleton.
    pub fn single(self) -> usize {
        assert_eq!(self.len(), 1, "color set is not a singleton");
        self.0.trailing_zeros() as usize
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

/// A single structural defect found while validating a graph document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyGraph,
    DuplicateNode { id: String },
    DuplicatePaletteColor { color: String },
    PaletteTooLarge { count: usize },
    NodeNoColors { id: String },
    UnknownColor { id: String, color: String },
    EdgeMissingNode { id: String },
    DuplicateEdge { from: String, to: String },
    EdgeNoColors { from: String, to: String },
    UnknownEdgeColor { from: String, to: String, color: String },
    UnknownStartNode { id: String },
    DuplicateStartNode { id: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGraph => write!(f, "graph has no nodes"),
            Violation::DuplicateNode { id } => write!(f, "duplicate node id {id}"),
            Violation::DuplicatePaletteColor { color } => {
                write!(f, "duplicate palette color {color}")
            }
            Violation::PaletteTooLarge { count } => {
                write!(f, "palette has {count} colors but at most {MAX_COLORS} are supported")
            }
            Violation::NodeNoColors { id } => write!(f, "node {id} has no colors"),
            Violation::UnknownColor { id, color } => {
                write!(f, "node {id} uses color {color} not in palette")
            }
            Violation::EdgeMissingNode { id } => write!(f, "edge references missing node {id}"),
            Violation::DuplicateEdge { from, to } => write!(f, "duplicate edge {from} -> {to}"),
            Violation::EdgeNoColors { from, to } => write!(f, "edge {from} -> {to} has no colors"),
            Violation::UnknownEdgeColor { from, to, color } => {
                write!(f, "edge {from} -> {to} uses color {color} not in palette")
            }
            Violation::UnknownStartNode { id } => write!(f, "start node {id} is not a node"),
            Violation::DuplicateStartNode { id } => write!(f, "duplicate start node {id}"),
        }
    }
}

/// Raw on-disk form of a node-colored graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub palette: Vec<String>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_nodes: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    pub colors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
}

/// Raw on-disk form of an edge-colored graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeGraphDoc {
    pub palette: Vec<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<ColoredEdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_nodes: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredEdgeDoc {
    pub from: String,
    pub to: String,
    pub colors: Vec<String>,
}

fn check_palette(palette: &[String], violations: &mut Vec<Violation>) -> HashSet<String> {
    if palette.len() > MAX_COLORS {
        violations.push(Violation::PaletteTooLarge {
            count: palette.len(),
        });
    }
    let mut seen = HashSet::new();
    for color in palette {
        if !seen.insert(color.clone()) {
            violations.push(Violation::DuplicatePaletteColor {
                color: color.clone(),
            });
        }
    }
    seen
}

fn check_start_nodes(
    start_nodes: Option<&Vec<String>>,
    node_ids: &HashSet<String>,
    violations: &mut Vec<Violation>,
) {
    if let Some(starts) = start_nodes {
        let mut seen = HashSet::new();
        for id in starts {
            if !node_ids.contains(id) {
                violations.push(Violation::UnknownStartNode { id: id.clone() });
            } else if !seen.insert(id.clone()) {
                violations.push(Violation::DuplicateStartNode { id: id.clone() });
            }
        }
    }
}

impl GraphDoc {
    /// Checks the document for structural defects, returning every violation
    /// found (an empty vector means the document is valid).
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let palette = check_palette(&self.palette, &mut violations);

        if self.nodes.is_empty() {
            violations.push(Violation::EmptyGraph);
        }
        let mut node_ids = HashSet::new();
        for node in &self.nodes {
            if !node_ids.insert(node.id.clone()) {
                violations.push(Violation::DuplicateNode {
                    id: node.id.clone(),
                });
            }
            if node.colors.is_empty() {
                violations.push(Violation::NodeNoColors {
                    id: node.id.clone(),
                });
            }
            for color in &node.colors {
                if !palette.contains(color) {
                    violations.push(Violation::UnknownColor {
                        id: node.id.clone(),
                        color: color.clone(),
                    });
                }
            }
        }

        let mut seen_edges = HashSet::new();
        for edge in &self.edges {
            for endpoint in [&edge.from, &edge.to] {
                if !node_ids.contains(endpoint) {
                    violations.push(Violation::EdgeMissingNode {
                        id: endpoint.clone(),
                    });
                }
            }
            if !seen_edges.insert((edge.from.clone(), edge.to.clone())) {
                violations.push(Violation::DuplicateEdge {
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                });
            }
        }

        check_start_nodes(self.start_nodes.as_ref(), &node_ids, &mut violations);
        violations
    }

    /// Validates and compiles into the canonical in-memory form.
    pub fn compile(&self) -> Result<ColoredGraph> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }

        let palette_index: HashMap<&str, usize> = self
            .palette
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();

        let mut nodes: Vec<NodeData> = self
            .nodes
            .iter()
            .map(|n| NodeData {
                id: n.id.clone(),
                colors: ColorSet::from_indices(n.colors.iter().map(|c| palette_index[c.as_str()])),
            })
            .collect();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));

        let id_index: HashMap<String, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();

        let mut edges: Vec<(NodeId, NodeId)> = self
            .edges
            .iter()
            .map(|e| (id_index[&e.from], id_index[&e.to]))
            .collect();
        edges.sort_unstable();

        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        for &(u, v) in &edges {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }

        let start = self
            .start_nodes
            .as_ref()
            .map(|s| s.iter().map(|id| id_index[id]).collect::<BTreeSet<_>>());

        Ok(ColoredGraph {
            palette: self.palette.clone(),
            nodes,
            id_index,
            edges,
            out_adj,
            in_adj,
            start,
        })
    }
}

impl EdgeGraphDoc {
    /// Checks the document for structural defects.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let palette = check_palette(&self.palette, &mut violations);

        if self.nodes.is_empty() {
            violations.push(Violation::EmptyGraph);
        }
        let mut node_ids = HashSet::new();
        for id in &self.nodes {
            if !node_ids.insert(id.clone()) {
                violations.push(Violation::DuplicateNode { id: id.clone() });
            }
        }

        let mut seen_edges = HashSet::new();
        for edge in &self.edges {
            for endpoint in [&edge.from, &edge.to] {
                if !node_ids.contains(endpoint) {
                    violations.push(Violation::EdgeMissingNode {
                        id: endpoint.clone(),
                    });
                }
            }
            if !seen_edges.insert((edge.from.clone(), edge.to.clone())) {
                violations.push(Violation::DuplicateEdge {
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                });
            }
            if edge.colors.is_empty() {
                violations.push(Violation::EdgeNoColors {
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                });
            }
            for color in &edge.colors {
                if !palette.contains(color) {
                    violations.push(Violation::UnknownEdgeColor {
                        from: edge.from.clone(),
                        to: edge.to.clone(),
                        color: color.clone(),
                    });
                }
            }
        }

        check_start_nodes(self.start_nodes.as_ref(), &node_ids, &mut violations);
        violations
    }

    /// Validates and compiles into the canonical in-memory form.
    pub fn compile(&self) -> Result<EdgeColoredGraph> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }

        let palette_index: HashMap<&str, usize> = self
            .palette
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();

        let mut node_ids: Vec<String> = self.nodes.clone();
        node_ids.sort();
        let id_index: HashMap<String, NodeId> = node_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();

        let mut edges: Vec<(NodeId, NodeId, ColorSet)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    id_index[&e.from],
                    id_index[&e.to],
                    ColorSet::from_indices(e.colors.iter().map(|c| palette_index[c.as_str()])),
                )
            })
            .collect();
        edges.sort_unstable();

        let mut out_adj = vec![Vec::new(); node_ids.len()];
        let mut in_adj = vec![Vec::new(); node_ids.len()];
        for &(u, v, colors) in &edges {
            out_adj[u].push((v, colors));
            in_adj[v].push((u, colors));
        }

        let start = self
            .start_nodes
            .as_ref()
            .map(|s| s.iter().map(|id| id_index[id]).collect::<BTreeSet<_>>());

        Ok(EdgeColoredGraph {
            palette: self.palette.clone(),
            node_ids,
            id_index,
            edges,
            out_adj,
            in_adj,
            start,
        })
    }
}

/// A node together with its color set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeData {
    pub id: String,
    pub colors: ColorSet,
}

/// Compiled, validated node-colored directed graph.
///
/// Nodes are sorted by id and edges by `(from, to)` index pair, so two graphs
/// compare equal exactly when they have the same palette (in the same order),
/// nodes, colors, edges, and start set.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    palette: Vec<String>,
    nodes: Vec<NodeData>,
    id_index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    start: Option<BTreeSet<NodeId>>,
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.palette == other.palette
            && self.nodes == other.nodes
            && self.edges == other.edges
            && self.start == other.start
    }
}

impl Eq for ColoredGraph {}

impl ColoredGraph {
    /// Convenience constructor for programmatic graphs (tests, generators).
    pub fn build(
        palette: &[&str],
        nodes: &[(&str, &[&str])],
        edges: &[(&str, &str)],
        start_nodes: Option<&[&str]>,
    ) -> Result<Self> {
        let doc = GraphDoc {
            palette: palette.iter().map(|s| s.to_string()).collect(),
            nodes: nodes
                .iter()
                .map(|(id, colors)| NodeDoc {
                    id: id.to_string(),
                    colors: colors.iter().map(|c| c.to_string()).collect(),
                })
                .collect(),
            edges: edges
                .iter()
                .map(|(from, to)| EdgeDoc {
                    from: from.to_string(),
                    to: to.to_string(),
                })
                .collect(),
            start_nodes: start_nodes.map(|s| s.iter().map(|id| id.to_string()).collect()),
        };
        doc.compile()
    }

    /// Serializable document form; compiling it back yields an equal graph.
    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            palette: self.palette.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    colors: n.colors.iter().map(|i| self.palette[i].clone()).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| EdgeDoc {
                    from: self.nodes[u].id.clone(),
                    to: self.nodes[v].id.clone(),
                })
                .collect(),
            start_nodes: self
                .start
                .as_ref()
                .map(|s| s.iter().map(|&i| self.nodes[i].id.clone()).collect()),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn palette(&self) -> &[String] {
        &self.palette
    }

    pub fn color_name(&self, color: usize) -> &str {
        &self.palette[color]
    }

    pub fn color_index(&self, name: &str) -> Option<usize> {
        self.palette.iter().position(|c| c == name)
    }

    pub fn nodes(&self) -> &[NodeData] {
        &self.nodes
    }

    pub fn node_id(&self, node: NodeId) -> &str {
        &self.nodes[node].id
    }

    pub fn index_of(&self, id: &str) -> Option<NodeId> {
        self.id_index.get(id).copied()
    }

    pub fn colors(&self, node: NodeId) -> ColorSet {
        self.nodes[node].colors
    }

    pub fn color_names(&self, node: NodeId) -> Vec<&str> {
        self.nodes[node]
            .colors
            .iter()
            .map(|i| self.palette[i].as_str())
            .collect()
    }

    /// Edges as sorted `(from, to)` index pairs.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn out_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.out_adj[node]
    }

    pub fn in_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.in_adj[node]
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.edges.binary_search(&(from, to)).is_ok()
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out_adj[node].len()
    }

    pub fn in_degree(&self, node: NodeId) -> usize {
        self.in_adj[node].len()
    }

    /// Designated start nodes, if the graph declares any.
    pub fn start_nodes(&self) -> Option<&BTreeSet<NodeId>> {
        self.start.as_ref()
    }

    pub fn is_start(&self, node: NodeId) -> bool {
        match &self.start {
            Some(s) => s.contains(&node),
            None => false,
        }
    }

    /// True when every node carries exactly one color.
    pub fn is_single_colored(&self) -> bool {
        self.nodes.iter().all(|n| n.colors.len() == 1)
    }

    /// Node indices iterator, for readability at call sites.
    pub fn node_indices(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }
}

/// Compiled, validated edge-colored directed graph.
#[derive(Debug, Clone)]
pub struct EdgeColoredGraph {
    palette: Vec<String>,
    node_ids: Vec<String>,
    id_index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId, ColorSet)>,
    out_adj: Vec<Vec<(NodeId, ColorSet)>>,
    in_adj: Vec<Vec<(NodeId, ColorSet)>>,
    start: Option<BTreeSet<NodeId>>,
}

impl PartialEq for EdgeColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.palette == other.palette
            && self.node_ids == other.node_ids
            && self.edges == other.edges
            && self.start == other.start
    }
}

impl Eq for EdgeColoredGraph {}

impl EdgeColoredGraph {
    pub fn build(
        palette: &[&str],
        nodes: &[&str],
        edges: &[(&str, &str, &[&str])],
        start_nodes: Option<&[&str]>,
    ) -> Result<Self> {
        let doc = EdgeGraphDoc {
            palette: palette.iter().map(|s| s.to_string()).collect(),
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(from, to, colors)| ColoredEdgeDoc {
                    from: from.to_string(),
                    to: to.to_string(),
                    colors: colors.iter().map(|c| c.to_string()).collect(),
                })
                .collect(),
            start_nodes: start_nodes.map(|s| s.iter().map(|id| id.to_string()).collect()),
        };
        doc.compile()
    }

    pub fn to_doc(&self) -> EdgeGraphDoc {
        EdgeGraphDoc {
            palette: self.palette.clone(),
            nodes: self.node_ids.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v, colors)| ColoredEdgeDoc {
                    from: self.node_ids[u].clone(),
                    to: self.node_ids[v].clone(),
                    colors: colors.iter().map(|i| self.palette[i].clone()).collect(),
                })
                .collect(),
            start_nodes: self
                .start
                .as_ref()
                .map(|s| s.iter().map(|&i| self.node_ids[i].clone()).collect()),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn palette(&self) -> &[String] {
        &self.palette
    }

    pub fn color_name(&self, color: usize) -> &str {
        &self.palette[color]
    }

    pub fn node_id(&self, node: NodeId) -> &str {
        &self.node_ids[node]
    }

    pub fn index_of(&self, id: &str) -> Option<NodeId> {
        self.id_index.get(id).copied()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId, ColorSet)] {
        &self.edges
    }

    pub fn out_neighbors(&self, node: NodeId) -> &[(NodeId, ColorSet)] {
        &self.out_adj[node]
    }

    pub fn in_neighbors(&self, node: NodeId) -> &[(NodeId, ColorSet)] {
        &self.in_adj[node]
    }

    pub fn in_degree(&self, node: NodeId) -> usize {
        self.in_adj[node].len()
    }

    pub fn start_nodes(&self) -> Option<&BTreeSet<NodeId>> {
        self.start.as_ref()
    }

    pub fn is_start(&self, node: NodeId) -> bool {
        match &self.start {
            Some(s) => s.contains(&node),
            None => false,
        }
    }

    pub fn node_indices(&self) -> std::ops::Range<NodeId> {
        0..self.node_ids.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_set_basics() {
        let mut set = ColorSet::EMPTY;
        assert!(set.is_empty());
        set.insert(3);
        set.insert(0);
        assert_eq!(set.len(), 2);
        assert!(set.contains(0) && set.contains(3) && !set.contains(1));
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![0, 3]);
        assert!(set.intersects(ColorSet::singleton(3)));
        assert!(!set.intersects(ColorSet::singleton(2)));
        assert_eq!(ColorSet::singleton(5).single(), 5);
    }

    #[test]
    fn compile_canonicalizes_order() {
        let g1 = ColoredGraph::build(
            &["Red", "Blue"],
            &[("b", &["Blue"]), ("a", &["Red"])],
            &[("b", "a"), ("a", "b")],
            None,
        )
        .unwrap();
        let g2 = ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"])],
            &[("a", "b"), ("b", "a")],
            None,
        )
        .unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.node_id(0), "a");
        assert_eq!(g1.edges(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn palette_order_is_significant() {
        let g1 = ColoredGraph::build(&["Red", "Blue"], &[("a", &["Red"])], &[], None).unwrap();
        let g2 = ColoredGraph::build(&["Blue", "Red"], &[("a", &["Red"])], &[], None).unwrap();
        assert_ne!(g1, g2);
    }

    #[test]
    fn validate_reports_expected_messages() {
        let doc = GraphDoc {
            palette: vec!["Red".into()],
            nodes: vec![
                NodeDoc {
                    id: "a".into(),
                    colors: vec!["Red".into()],
                },
                NodeDoc {
                    id: "b".into(),
                    colors: vec![],
                },
            ],
            edges: vec![EdgeDoc {
                from: "a".into(),
                to: "z".into(),
            }],
            start_nodes: None,
        };
        let violations = doc.validate();
        let messages: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        assert!(messages.contains(&"node b has no colors".to_string()));
        assert!(messages.contains(&"edge references missing node z".to_string()));
    }

    #[test]
    fn empty_graph_is_a_violation() {
        let doc = GraphDoc {
            palette: vec!["Red".into()],
            nodes: vec![],
            edges: vec![],
            start_nodes: None,
        };
        let messages: Vec<String> = doc.validate().iter().map(|v| v.to_string()).collect();
        assert_eq!(messages, vec!["graph has no nodes".to_string()]);
    }

    #[test]
    fn validate_catches_duplicates_and_unknowns() {
        let doc = GraphDoc {
            palette: vec!["Red".into(), "Red".into()],
            nodes: vec![
                NodeDoc {
                    id: "a".into(),
                    colors: vec!["Red".into()],
                },
                NodeDoc {
                    id: "a".into(),
                    colors: vec!["Green".into()],
                },
            ],
            edges: vec![
                EdgeDoc {
                    from: "a".into(),
                    to: "a".into(),
                },
                EdgeDoc {
                    from: "a".into(),
                    to: "a".into(),
                },
            ],
            start_nodes: Some(vec!["a".into(), "a".into(), "q".into()]),
        };
        let violations = doc.validate();
        assert!(violations.contains(&Violation::DuplicatePaletteColor {
            color: "Red".into()
        }));
        assert!(violations.contains(&Violation::DuplicateNode { id: "a".into() }));
        assert!(violations.contains(&Violation::UnknownColor {
            id: "a".into(),
            color: "Green".into()
        }));
        assert!(violations.contains(&Violation::DuplicateEdge {
            from: "a".into(),
            to: "a".into()
        }));
        assert!(violations.contains(&Violation::DuplicateStartNode { id: "a".into() }));
        assert!(violations.contains(&Violation::UnknownStartNode { id: "q".into() }));
    }

    #[test]
    fn compile_rejects_invalid() {
        let doc = GraphDoc {
            palette: vec![],
            nodes: vec![],
            edges: vec![],
            start_nodes: None,
        };
        assert!(matches!(doc.compile(), Err(Error::Validation(_))));
    }

    #[test]
    fn doc_round_trip_is_identity() {
        let g = ColoredGraph::build(
            &["Red", "Blue"],
            &[("x", &["Red", "Blue"]), ("y", &["Blue"])],
            &[("x", "y"), ("y", "y")],
            Some(&["x"]),
        )
        .unwrap();
        let again = g.to_doc().compile().unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn edge_colored_build_and_round_trip() {
        let g = EdgeColoredGraph::build(
            &["Red", "Blue"],
            &["a", "b"],
            &[("a", "b", &["Red"]), ("b", "a", &["Red", "Blue"])],
            None,
        )
        .unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges().len(), 2);
        let again = g.to_doc().compile().unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn edge_colored_validation() {
        let doc = EdgeGraphDoc {
            palette: vec!["Red".into()],
            nodes: vec!["a".into()],
            edges: vec![ColoredEdgeDoc {
                from: "a".into(),
                to: "a".into(),
                colors: vec![],
            }],
            start_nodes: None,
        };
        let messages: Vec<String> = doc.validate().iter().map(|v| v.to_string()).collect();
        assert!(messages.contains(&"edge a -> a has no colors".to_string()));
    }
}
