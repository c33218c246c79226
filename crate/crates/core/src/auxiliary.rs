//! Auxiliary pair graphs and cycle machinery.
//!
//! Structural observability questions about a colored graph G reduce to
//! cycle questions about graphs built over *pairs* of G's nodes:
//!
//! - **G²** ([`build_g2`]): ordered off-diagonal pairs; edge
//!   `(v1,v2) → (v1',v2')` iff both component edges exist in G and the
//!   targets share a color.  A cycle in G² is exactly a pair of separated
//!   cycles with the same coloring.
//! - **G̃²** ([`build_g2_tilde`]): same nodes; edge iff `v1'` is reachable in
//!   one step from `v1` *or* `v2`, likewise `v2'`, and the targets share a
//!   color.  A supergraph of G²; acyclicity characterizes partial
//!   observability.
//! - **product** ([`build_product`]): the G² rule with diagonal pairs
//!   allowed.  An SCC containing both a diagonal and an off-diagonal pair
//!   witnesses intersecting cycles.
//! - **A** ([`build_a`]): the uncolored variant used by the chromatic-bound
//!   construction; edges require only the two component edges.
//!
//! The module also provides SCC decomposition, cycle detection with
//! witnesses, and budgeted elementary-cycle enumeration.

use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, NodeId};

/// Default cap on elementary-cycle enumeration before a budget error.
pub const DEFAULT_CYCLE_BUDGET: usize = 10_000;

/// Which pair-graph construction produced a [`PairGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    G2,
    G2Tilde,
    Product,
    AUncolored,
}

/// A directed graph over (ordered) pairs of source-graph nodes.
#[derive(Debug, Clone)]
pub struct PairGraph {
    kind: PairKind,
    source_nodes: usize,
    pairs: Vec<(NodeId, NodeId)>,
    index: HashMap<(NodeId, NodeId), usize>,
    adj: Vec<Vec<usize>>,
}

impl PairGraph {
    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum()
    }

    /// Pair nodes in sorted order.
    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn pair(&self, idx: usize) -> (NodeId, NodeId) {
        self.pairs[idx]
    }

    pub fn index_of(&self, pair: (NodeId, NodeId)) -> Option<usize> {
        self.index.get(&pair).copied()
    }

    pub fn neighbors(&self, idx: usize) -> &[usize] {
        &self.adj[idx]
    }

    pub fn source_node_count(&self) -> usize {
        self.source_nodes
    }

    /// True when the pair graph has no directed cycle (self-loops count).
    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Finds some directed cycle, returned as pair indices `c_0 … c_{k-1}`
    /// with edges `c_i → c_{i+1 mod k}`; `None` when acyclic.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Gray, // on the current DFS path
            Black,
        }
        let n = self.pairs.len();
        let mut mark = vec![Mark::White; n];
        let mut path: Vec<usize> = Vec::new();
        // Each stack frame holds (node, next neighbor position to try).
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if mark[root] != Mark::White {
                continue;
            }
            stack.push((root, 0));
            mark[root] = Mark::Gray;
            path.push(root);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.adj[v].len() {
                    let w = self.adj[v][*next];
                    *next += 1;
                    match mark[w] {
                        Mark::Gray => {
                            // Back edge: the cycle is the path suffix from w.
                            let start = path.iter().position(|&p| p == w).unwrap();
                            return Some(path[start..].to_vec());
                        }
                        Mark::White => {
                            mark[w] = Mark::Gray;
                            path.push(w);
                            stack.push((w, 0));
                        }
                        Mark::Black => {}
                    }
                } else {
                    mark[v] = Mark::Black;
                    path.pop();
                    stack.pop();
                }
            }
        }
        None
    }

    /// Strongly connected components (Tarjan), each sorted ascending; the
    /// list is sorted by smallest member.  Singletons without self-loops are
    /// trivial SCCs and are included.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        tarjan_sccs(&self.adj)
    }

    /// Elementary cycles (as index lists), failing once `budget` cycles have
    /// been collected and more remain.
    pub fn elementary_cycles(&self, budget: usize) -> Result<Vec<Vec<usize>>> {
        elementary_cycles(&self.adj, budget)
    }

    /// Graphviz rendering for inspection; pair nodes are labeled with the
    /// source node ids.
    pub fn to_dot(&self, source: &ColoredGraph) -> String {
        use std::fmt::Write as _;
        let name = match self.kind {
            PairKind::G2 => "g2",
            PairKind::G2Tilde => "g2_tilde",
            PairKind::Product => "product",
            PairKind::AUncolored => "a_uncolored",
        };
        let label = |idx: usize| {
            let (v1, v2) = self.pairs[idx];
            format!("({},{})", source.node_id(v1), source.node_id(v2))
        };
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        for idx in 0..self.pairs.len() {
            let _ = writeln!(out, "  \"{}\";", label(idx));
        }
        for (idx, targets) in self.adj.iter().enumerate() {
            for &t in targets {
                let _ = writeln!(out, "  \"{}\" -> \"{}\";", label(idx), label(t));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn make_pair_graph(
    kind: PairKind,
    n: usize,
    include_diagonal: bool,
) -> (Vec<(NodeId, NodeId)>, HashMap<(NodeId, NodeId), usize>) {
    let mut pairs = Vec::new();
    for v1 in 0..n {
        for v2 in 0..n {
            if include_diagonal || v1 != v2 {
                pairs.push((v1, v2));
            }
        }
    }
    let index = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let _ = kind;
    (pairs, index)
}

/// Builds G²: off-diagonal pairs, both component edges, color-sharing heads.
pub fn build_g2(graph: &ColoredGraph) -> PairGraph {
    build_componentwise(graph, PairKind::G2, false)
}

/// Builds the full product graph: the G² rule with diagonal pairs included.
pub fn build_product(graph: &ColoredGraph) -> PairGraph {
    build_componentwise(graph, PairKind::Product, true)
}

fn build_componentwise(graph: &ColoredGraph, kind: PairKind, diagonal: bool) -> PairGraph {
    let n = graph.node_count();
    let (pairs, index) = make_pair_graph(kind, n, diagonal);
    let mut adj = vec![Vec::new(); pairs.len()];
    for (i, &(v1, v2)) in pairs.iter().enumerate() {
        for &t1 in graph.out_neighbors(v1) {
            for &t2 in graph.out_neighbors(v2) {
                if !diagonal && t1 == t2 {
                    continue;
                }
                if graph.colors(t1).intersects(graph.colors(t2)) {
                    adj[i].push(index[&(t1, t2)]);
                }
            }
        }
        adj[i].sort_unstable();
        adj[i].dedup();
    }
    PairGraph {
        kind,
        source_nodes: n,
        pairs,
        index,
        adj,
    }
}

/// Builds G̃²: off-diagonal pairs; each head only needs an edge from either
/// component, heads must share a color.
pub fn build_g2_tilde(graph: &ColoredGraph) -> PairGraph {
    let n = graph.node_count();
    let (pairs, index) = make_pair_graph(PairKind::G2Tilde, n, false);
    let mut adj = vec![Vec::new(); pairs.len()];
    let mut union = Vec::new();
    for (i, &(v1, v2)) in pairs.iter().enumerate() {
        union.clear();
        union.extend_from_slice(graph.out_neighbors(v1));
        union.extend_from_slice(graph.out_neighbors(v2));
        union.sort_unstable();
        union.dedup();
        for &t1 in &union {
            for &t2 in &union {
                if t1 == t2 {
                    continue;
                }
                if graph.colors(t1).intersects(graph.colors(t2)) {
                    adj[i].push(index[&(t1, t2)]);
                }
            }
        }
        adj[i].sort_unstable();
    }
    let pg = PairGraph {
        kind: PairKind::G2Tilde,
        source_nodes: n,
        pairs,
        index,
        adj,
    };
    debug_assert!(is_edge_superset(&pg, &build_g2(graph)));
    pg
}

/// Builds the uncolored pair graph A: off-diagonal pairs, both component
/// edges required, colors ignored.
pub fn build_a(graph: &ColoredGraph) -> PairGraph {
    let n = graph.node_count();
    let (pairs, index) = make_pair_graph(PairKind::AUncolored, n, false);
    let mut adj = vec![Vec::new(); pairs.len()];
    for (i, &(v1, v2)) in pairs.iter().enumerate() {
        for &t1 in graph.out_neighbors(v1) {
            for &t2 in graph.out_neighbors(v2) {
                if t1 != t2 {
                    adj[i].push(index[&(t1, t2)]);
                }
            }
        }
        adj[i].sort_unstable();
    }
    PairGraph {
        kind: PairKind::AUncolored,
        source_nodes: n,
        pairs,
        index,
        adj,
    }
}

/// True when every edge of `sub` also appears in `sup` (same pair node set).
pub fn is_edge_superset(sup: &PairGraph, sub: &PairGraph) -> bool {
    sub.adj.iter().enumerate().all(|(i, targets)| {
        let (v1, v2) = sub.pairs[i];
        let Some(si) = sup.index_of((v1, v2)) else {
            return targets.is_empty();
        };
        targets.iter().all(|&t| {
            let pair = sub.pairs[t];
            sup.index_of(pair)
                .map(|st| sup.adj[si].binary_search(&st).is_ok())
                .unwrap_or(false)
        })
    })
}

// ---------------------------------------------------------------------------
// Cycle witnesses
// ---------------------------------------------------------------------------

/// A pair-graph cycle projected back to two closed walks in the source
/// graph.  Positions are cyclic: index `i` is followed by `(i+1) mod len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    /// The witnessing pair-node cycle, as source node id pairs.
    pub pair_cycle: Vec<(String, String)>,
    /// First components of the pair cycle: a closed walk in the source graph.
    pub projection_1: Vec<String>,
    /// Second components: another closed walk of the same length.
    pub projection_2: Vec<String>,
    /// Per-position shared colors of the two walks (always non-empty).
    pub shared_color_sequence: Vec<Vec<String>>,
    /// For intersecting-cycle witnesses: a position where the walks agree.
    pub intersection_position: Option<usize>,
}

impl CycleWitness {
    /// Builds a witness from a cycle in a component-wise pair graph (G² or
    /// product); both projections are then closed walks by construction.
    pub fn from_pair_cycle(
        graph: &ColoredGraph,
        pg: &PairGraph,
        cycle: &[usize],
        intersection_position: Option<usize>,
    ) -> Self {
        assert!(
            matches!(pg.kind(), PairKind::G2 | PairKind::Product),
            "witness projections require component-wise pair edges"
        );
        let mut pair_cycle = Vec::with_capacity(cycle.len());
        let mut projection_1 = Vec::with_capacity(cycle.len());
        let mut projection_2 = Vec::with_capacity(cycle.len());
        let mut shared = Vec::with_capacity(cycle.len());
        for &idx in cycle {
            let (v1, v2) = pg.pair(idx);
            pair_cycle.push((graph.node_id(v1).to_string(), graph.node_id(v2).to_string()));
            projection_1.push(graph.node_id(v1).to_string());
            projection_2.push(graph.node_id(v2).to_string());
            shared.push(
                graph
                    .colors(v1)
                    .intersection(graph.colors(v2))
                    .iter()
                    .map(|c| graph.color_name(c).to_string())
                    .collect(),
            );
        }
        let witness = CycleWitness {
            pair_cycle,
            projection_1,
            projection_2,
            shared_color_sequence: shared,
            intersection_position,
        };
        witness
            .validate(graph)
            .expect("pair-cycle witness must self-validate");
        witness
    }

    pub fn len(&self) -> usize {
        self.projection_1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projection_1.is_empty()
    }

    /// True when the projections disagree at every position.
    pub fn is_separated(&self) -> bool {
        self.projection_1
            .iter()
            .zip(&self.projection_2)
            .all(|(a, b)| a != b)
    }

    /// True when the projections agree somewhere and disagree somewhere.
    pub fn is_intersecting(&self) -> bool {
        let eq = self
            .projection_1
            .iter()
            .zip(&self.projection_2)
            .filter(|(a, b)| a == b)
            .count();
        eq >= 1 && eq < self.len()
    }

    /// Checks the witness invariants against the source graph: both
    /// projections are closed walks, and every position shares a color.
    pub fn validate(&self, graph: &ColoredGraph) -> Result<()> {
        let k = self.len();
        if k == 0 {
            return Err(Error::Internal("empty cycle witness".into()));
        }
        if self.projection_2.len() != k
            || self.pair_cycle.len() != k
            || self.shared_color_sequence.len() != k
        {
            return Err(Error::Internal("witness field lengths differ".into()));
        }
        for proj in [&self.projection_1, &self.projection_2] {
            for i in 0..k {
                let from = graph
                    .index_of(&proj[i])
                    .ok_or_else(|| Error::Internal(format!("unknown node {}", proj[i])))?;
                let to = graph
                    .index_of(&proj[(i + 1) % k])
                    .ok_or_else(|| Error::Internal(format!("unknown node {}", proj[(i + 1) % k])))?;
                if !graph.has_edge(from, to) {
                    return Err(Error::Internal(format!(
                        "projection step {} -> {} is not an edge",
                        proj[i],
                        proj[(i + 1) % k]
                    )));
                }
            }
        }
        for i in 0..k {
            let a = graph.index_of(&self.projection_1[i]).unwrap();
            let b = graph.index_of(&self.projection_2[i]).unwrap();
            let shared = graph.colors(a).intersection(graph.colors(b));
            if shared.is_empty() {
                return Err(Error::Internal(format!(
                    "projections at position {i} share no color"
                )));
            }
            let names: Vec<String> = shared.iter().map(|c| graph.color_name(c).to_string()).collect();
            if names != self.shared_color_sequence[i] {
                return Err(Error::Internal(format!(
                    "recorded shared colors at position {i} are stale"
                )));
            }
        }
        if let Some(pos) = self.intersection_position {
            if pos >= k || self.projection_1[pos] != self.projection_2[pos] {
                return Err(Error::Internal(
                    "marked intersection position does not coincide".into(),
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// SCCs (Tarjan, iterative)
// ---------------------------------------------------------------------------

/// Tarjan's strongly connected components over an adjacency list.  Each
/// component is sorted ascending; components are ordered by smallest member.
pub fn tarjan_sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut components: Vec<Vec<usize>> = Vec::new();
    // DFS frames: (node, next neighbor position).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = frames.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }
    components.sort_by_key(|c| c[0]);
    components
}

// ---------------------------------------------------------------------------
// Elementary cycles (Johnson)
// ---------------------------------------------------------------------------

/// Enumerates elementary cycles, stopping cleanly at `cap`; the flag is
/// true when the cap was hit with cycles possibly remaining.
pub fn elementary_cycles_capped(adj: &[Vec<usize>], cap: usize) -> (Vec<Vec<usize>>, bool) {
    let mut enumerator = CycleEnumerator {
        adj,
        cap,
        cycles: Vec::new(),
        truncated: false,
        blocked: vec![false; adj.len()],
        block_map: vec![Vec::new(); adj.len()],
        path: Vec::new(),
    };
    enumerator.run();
    (enumerator.cycles, enumerator.truncated)
}

/// Enumerates all elementary cycles of a directed graph, including
/// self-loops, as node-index lists.  Fails with a budget error when more
/// than `budget` cycles exist.
pub fn elementary_cycles(adj: &[Vec<usize>], budget: usize) -> Result<Vec<Vec<usize>>> {
    let (cycles, truncated) = elementary_cycles_capped(adj, budget.saturating_add(1));
    if truncated || cycles.len() > budget {
        Err(Error::Budget(format!(
            "more than {budget} elementary cycles"
        )))
    } else {
        Ok(cycles)
    }
}

/// Johnson's elementary-circuit enumeration with an output cap.
struct CycleEnumerator<'a> {
    adj: &'a [Vec<usize>],
    cap: usize,
    cycles: Vec<Vec<usize>>,
    truncated: bool,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    path: Vec<usize>,
}

impl CycleEnumerator<'_> {
    fn emit(&mut self, cycle: Vec<usize>) {
        if self.cycles.len() >= self.cap {
            self.truncated = true;
        } else {
            self.cycles.push(cycle);
        }
    }

    fn unblock(&mut self, v: usize) {
        self.blocked[v] = false;
        let waiting = std::mem::take(&mut self.block_map[v]);
        for w in waiting {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }

    /// Circuit search rooted at `start` within `scc_adj` (nodes >= start).
    fn circuit(&mut self, v: usize, start: usize, scc_adj: &[Vec<usize>]) -> bool {
        let mut found = false;
        self.path.push(v);
        self.blocked[v] = true;
        for i in 0..scc_adj[v].len() {
            if self.truncated {
                break;
            }
            let w = scc_adj[v][i];
            if w == start {
                if self.path.len() >= 2 {
                    self.emit(self.path.clone());
                    found = true;
                }
            } else if !self.blocked[w] && self.circuit(w, start, scc_adj) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for i in 0..scc_adj[v].len() {
                let w = scc_adj[v][i];
                if !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        self.path.pop();
        found
    }

    fn run(&mut self) {
        let n = self.adj.len();
        // Self-loops are elementary cycles of length 1; the main search
        // below considers only longer cycles.
        for v in 0..n {
            if self.adj[v].contains(&v) {
                self.emit(vec![v]);
            }
        }
        for start in 0..n {
            if self.truncated {
                return;
            }
            // Subgraph induced by nodes >= start, self-loops removed.
            let sub: Vec<Vec<usize>> = (0..n)
                .map(|v| {
                    if v < start {
                        Vec::new()
                    } else {
                        self.adj[v]
                            .iter()
                            .copied()
                            .filter(|&w| w >= start && w != v)
                            .collect()
                    }
                })
                .collect();
            // Only explore within the SCC of `start` in that subgraph.
            let comps = tarjan_sccs(&sub);
            let Some(comp) = comps.iter().find(|c| c.contains(&start)) else {
                continue;
            };
            if comp.len() < 2 {
                continue;
            }
            let mut scc_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &v in comp {
                scc_adj[v] = sub[v]
                    .iter()
                    .copied()
                    .filter(|w| comp.binary_search(w).is_ok())
                    .collect();
            }
            for v in 0..n {
                self.blocked[v] = false;
                self.block_map[v].clear();
            }
            self.path.clear();
            self.circuit(start, start, &scc_adj);
        }
    }
}
