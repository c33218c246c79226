//! Indicator-node mitigation: upgrade a graph's observability class by
//! splicing uniquely-identifiable pass-through nodes into chosen edges.
//!
//! An *indicator* on edge `(u, v)` replaces the edge with a fresh node
//! `u__ind__v` and the two edges `(u, u__ind__v)`, `(u__ind__v, v)`.  The
//! node carries a designated indicator color, so any walk crossing the edge
//! now announces itself.  Function is preserved — every original walk has a
//! unique image — while the extra emission can break a pathology:
//!
//! - an indicator before one branch of a same-colored out-neighbor pair
//!   removes the branch ambiguity;
//! - an indicator on one cycle of a separated pair breaks the pair's common
//!   color sequence.
//!
//! Two solvers search a candidate edge set `F` for a placement achieving a
//! [`TargetClass`]:
//!
//! - [`solve_insp_exact`]: exhaustive by increasing subset size, returning a
//!   minimum-cardinality placement (lexicographically least among those).
//!   The underlying decision problem is NP-complete, so the search refuses
//!   candidate sets beyond a budget.
//! - [`solve_insp_greedy`]: repeatedly takes a witness of the pathology
//!   blocking the target and inserts on the witness edge with the lowest
//!   long-run traversal frequency.  Fast, no optimality guarantee; every
//!   returned placement is re-verified by classification.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::iter::{ParallelBridge, ParallelIterator};
use serde::{Deserialize, Serialize};

use crate::auxiliary::{self, CycleWitness};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeDoc, NodeDoc};
use crate::pathology;
use crate::taxonomy::{classify, Classification, ObservabilityClass};
use crate::tracking::{self, HmmModel, StartMode};

/// Largest candidate set the exact solver will search exhaustively.
pub const DEFAULT_INSP_BUDGET: usize = 20;

/// Palette name used by [`IndicatorColor::Fresh`].
pub const INDICATOR_COLOR: &str = "indicator";

/// Witnesses examined per greedy iteration before giving up.
const GREEDY_WITNESS_CAP: usize = 8;

/// Long-run edge frequencies closer than this are tied (broken by edge id).
const FREQUENCY_TOLERANCE: f64 = 1e-9;

/// The color carried by inserted indicator nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "name", rename_all = "snake_case")]
pub enum IndicatorColor {
    /// Reuse a color already in the graph's palette.
    Existing(String),
    /// Use the dedicated `indicator` color, added to the palette on demand.
    Fresh,
}

impl IndicatorColor {
    /// The palette name inserted nodes will carry.
    pub fn color_name(&self) -> &str {
        match self {
            IndicatorColor::Existing(name) => name,
            IndicatorColor::Fresh => INDICATOR_COLOR,
        }
    }
}

/// A set of edges to receive indicator nodes, plus the color to use.
///
/// At most one indicator per original edge: the chosen edges are kept sorted
/// and deduplicated, and stacking a second indicator onto an already-split
/// edge is impossible because the original edge no longer exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorPlacement {
    /// Chosen edges as `(from, to)` node ids, sorted lexicographically.
    pub chosen_edges: Vec<(String, String)>,
    pub indicator_color: IndicatorColor,
}

impl IndicatorPlacement {
    pub fn new(mut chosen_edges: Vec<(String, String)>, indicator_color: IndicatorColor) -> Self {
        chosen_edges.sort();
        chosen_edges.dedup();
        IndicatorPlacement {
            chosen_edges,
            indicator_color,
        }
    }

    pub fn empty(indicator_color: IndicatorColor) -> Self {
        IndicatorPlacement::new(Vec::new(), indicator_color)
    }

    pub fn len(&self) -> usize {
        self.chosen_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen_edges.is_empty()
    }

    /// Id of the node spliced into `(u, v)`.
    pub fn node_name(u: &str, v: &str) -> String {
        format!("{u}__ind__{v}")
    }
}

/// Splices an indicator node into every chosen edge and returns the new
/// graph.  Node count and edge count each grow by exactly
/// `placement.len()`; an empty placement returns the graph unchanged.
pub fn apply_indicators(graph: &ColoredGraph, placement: &IndicatorPlacement) -> Result<ColoredGraph> {
    let color_name = placement.indicator_color.color_name();
    if let IndicatorColor::Existing(name) = &placement.indicator_color {
        if graph.color_index(name).is_none() {
            return Err(Error::InvalidInput(format!(
                "indicator color {name:?} is not in the palette"
            )));
        }
    }
    let mut doc = graph.to_doc();
    if !placement.chosen_edges.is_empty() && !doc.palette.iter().any(|c| c == color_name) {
        doc.palette.push(color_name.to_string());
    }
    for (u, v) in &placement.chosen_edges {
        let (Some(from), Some(to)) = (graph.index_of(u), graph.index_of(v)) else {
            return Err(Error::InvalidInput(format!(
                "chosen edge ({u}, {v}) names an unknown node"
            )));
        };
        if !graph.has_edge(from, to) {
            return Err(Error::InvalidInput(format!(
                "chosen edge ({u}, {v}) is not an edge of the graph"
            )));
        }
        let name = IndicatorPlacement::node_name(u, v);
        if graph.index_of(&name).is_some() {
            return Err(Error::InvalidInput(format!(
                "indicator node id {name:?} collides with an existing node"
            )));
        }
        let position = doc
            .edges
            .iter()
            .position(|e| &e.from == u && &e.to == v)
            .expect("edge presence checked above");
        doc.edges.remove(position);
        doc.nodes.push(NodeDoc {
            id: name.clone(),
            colors: vec![color_name.to_string()],
        });
        doc.edges.push(EdgeDoc {
            from: u.clone(),
            to: name.clone(),
        });
        doc.edges.push(EdgeDoc {
            from: name,
            to: v.clone(),
        });
    }
    doc.compile()
}

/// Observability classes a mitigation search can aim for.
///
/// Each of the first four has a witness-producing detector that drives the
/// greedy loop.  `PartlyObservable` is accepted by the exact solver only:
/// a G̃² cycle mixes the pair-ambiguity of several pathologies and does not
/// localize to a meaningful edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetClass {
    Trackable,
    PartlyAPosterioriObservable,
    PartlyObservable,
    SemiUnifilar,
    Observable,
}

impl TargetClass {
    pub const ALL: [TargetClass; 5] = [
        TargetClass::Trackable,
        TargetClass::PartlyAPosterioriObservable,
        TargetClass::PartlyObservable,
        TargetClass::SemiUnifilar,
        TargetClass::Observable,
    ];

    /// The classification-report class this target corresponds to.
    pub fn as_class(self) -> ObservabilityClass {
        match self {
            TargetClass::Trackable => ObservabilityClass::Trackable,
            TargetClass::PartlyAPosterioriObservable => {
                ObservabilityClass::PartlyAPosterioriObservable
            }
            TargetClass::PartlyObservable => ObservabilityClass::PartlyObservable,
            TargetClass::SemiUnifilar => ObservabilityClass::SemiUnifilar,
            TargetClass::Observable => ObservabilityClass::Observable,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetClass::Trackable => "trackable",
            TargetClass::PartlyAPosterioriObservable => "partly_a_posteriori_observable",
            TargetClass::PartlyObservable => "partly_observable",
            TargetClass::SemiUnifilar => "semi_unifilar",
            TargetClass::Observable => "observable",
        }
    }
}

impl std::str::FromStr for TargetClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('-', "_");
        TargetClass::ALL
            .into_iter()
            .find(|t| t.name() == normalized)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown target class {s:?}; expected one of {}",
                    TargetClass::ALL.map(TargetClass::name).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for TargetClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks the target using only the detectors it depends on.  Equivalent to
/// running the full classification and asking for membership, but cheap
/// enough for the exact solver's inner loop.
pub fn meets_target(graph: &ColoredGraph, target: TargetClass) -> bool {
    match target {
        TargetClass::Trackable => pathology::detect_intersecting_cycles(graph).is_none(),
        TargetClass::PartlyAPosterioriObservable => auxiliary::build_g2(graph).is_acyclic(),
        TargetClass::PartlyObservable => auxiliary::build_g2_tilde(graph).is_acyclic(),
        TargetClass::SemiUnifilar => pathology::detect_scon(graph).is_empty(),
        TargetClass::Observable => {
            pathology::detect_scon(graph).is_empty() && auxiliary::build_g2(graph).is_acyclic()
        }
    }
}

/// Canonicalizes and validates a candidate edge list against the graph.
fn canonical_candidates(
    graph: &ColoredGraph,
    candidates: &[(String, String)],
) -> Result<Vec<(String, String)>> {
    let mut sorted: Vec<(String, String)> = candidates.to_vec();
    sorted.sort();
    sorted.dedup();
    for (u, v) in &sorted {
        let (Some(from), Some(to)) = (graph.index_of(u), graph.index_of(v)) else {
            return Err(Error::InvalidInput(format!(
                "candidate edge ({u}, {v}) names an unknown node"
            )));
        };
        if !graph.has_edge(from, to) {
            return Err(Error::InvalidInput(format!(
                "candidate edge ({u}, {v}) is not an edge of the graph"
            )));
        }
        let name = IndicatorPlacement::node_name(u, v);
        if graph.index_of(&name).is_some() {
            return Err(Error::InvalidInput(format!(
                "indicator node id {name:?} collides with an existing node"
            )));
        }
    }
    Ok(sorted)
}

/// Applies the placement and confirms by full classification that the target
/// class is reached.  Solvers never return an unverified placement.
fn verify_placement(
    graph: &ColoredGraph,
    placement: &IndicatorPlacement,
    target: TargetClass,
) -> Result<Classification> {
    let mitigated = apply_indicators(graph, placement)?;
    let classification = classify(&mitigated)?;
    if !classification.is(target.as_class()) {
        return Err(Error::Internal(format!(
            "solver produced a placement that fails re-classification for {target}"
        )));
    }
    Ok(classification)
}

/// Exhaustive minimum-cardinality search over subsets of `candidates`.
///
/// Subsets are tried in increasing size, so the first size with a solution
/// is minimal.  Within that size the lexicographically least solution is
/// returned, independent of evaluation order (subsets are checked in
/// parallel).  `budget` caps `|candidates|` (default
/// [`DEFAULT_INSP_BUDGET`]) because the search is exponential.
pub fn solve_insp_exact(
    graph: &ColoredGraph,
    candidates: &[(String, String)],
    target: TargetClass,
    indicator_color: IndicatorColor,
    budget: Option<usize>,
) -> Result<Option<IndicatorPlacement>> {
    if let IndicatorColor::Existing(name) = &indicator_color {
        if graph.color_index(name).is_none() {
            return Err(Error::InvalidInput(format!(
                "indicator color {name:?} is not in the palette"
            )));
        }
    }
    let candidates = canonical_candidates(graph, candidates)?;
    let budget = budget.unwrap_or(DEFAULT_INSP_BUDGET);
    if candidates.len() > budget {
        return Err(Error::Budget(format!(
            "candidate set has {} edges but the exhaustive search budget is {budget}",
            candidates.len()
        )));
    }
    if meets_target(graph, target) {
        let placement = IndicatorPlacement::empty(indicator_color);
        verify_placement(graph, &placement, target)?;
        return Ok(Some(placement));
    }
    for size in 1..=candidates.len() {
        let best = (0..candidates.len())
            .combinations(size)
            .par_bridge()
            .filter_map(|subset| {
                let chosen: Vec<(String, String)> =
                    subset.iter().map(|&i| candidates[i].clone()).collect();
                let placement = IndicatorPlacement::new(chosen, indicator_color.clone());
                let mitigated = apply_indicators(graph, &placement)
                    .expect("candidate edges validated before the search");
                meets_target(&mitigated, target).then_some(placement.chosen_edges)
            })
            .min();
        if let Some(chosen) = best {
            let placement = IndicatorPlacement::new(chosen, indicator_color);
            verify_placement(graph, &placement, target)?;
            return Ok(Some(placement));
        }
    }
    Ok(None)
}

/// Edge sets touched by the witnesses of the pathology currently blocking
/// `target`, in detector order.  Empty means the target is already met.
fn blocking_witness_edge_sets(
    graph: &ColoredGraph,
    target: TargetClass,
) -> Result<Vec<BTreeSet<(String, String)>>> {
    let scon_sets = |graph: &ColoredGraph| -> Vec<BTreeSet<(String, String)>> {
        pathology::detect_scon(graph)
            .into_iter()
            .map(|entry| {
                entry
                    .neighbors
                    .iter()
                    .map(|n| (entry.node.clone(), n.clone()))
                    .collect()
            })
            .collect()
    };
    let cycle_sets = |witnesses: Vec<CycleWitness>| -> Vec<BTreeSet<(String, String)>> {
        witnesses.iter().map(witness_edges).collect()
    };
    Ok(match target {
        TargetClass::Trackable => {
            cycle_sets(pathology::intersecting_witnesses(graph, GREEDY_WITNESS_CAP))
        }
        TargetClass::PartlyAPosterioriObservable => {
            cycle_sets(pathology::separated_witnesses(graph, GREEDY_WITNESS_CAP))
        }
        TargetClass::SemiUnifilar => scon_sets(graph),
        TargetClass::Observable => {
            let scon = scon_sets(graph);
            if scon.is_empty() {
                cycle_sets(pathology::separated_witnesses(graph, GREEDY_WITNESS_CAP))
            } else {
                scon
            }
        }
        TargetClass::PartlyObservable => {
            return Err(Error::InvalidInput(
                "partly_observable has no localized witness; use the exact solver".into(),
            ))
        }
    })
}

/// The edges traversed by both projections of a cycle witness.
fn witness_edges(witness: &CycleWitness) -> BTreeSet<(String, String)> {
    let mut edges = BTreeSet::new();
    let k = witness.len();
    for projection in [&witness.projection_1, &witness.projection_2] {
        for i in 0..k {
            edges.insert((projection[i].clone(), projection[(i + 1) % k].clone()));
        }
    }
    edges
}

/// Long-run traversal frequency of every edge: `π(u) · P(u, v)` where `π`
/// is the long-run state distribution of the chain given by `probabilities`
/// (uniform rows when absent).
///
/// The frequencies only rank candidate edges, so the fallbacks are graceful:
/// a graph that cannot carry a chain (multi-colored nodes, sinks), or whose
/// chain is not irreducible, gets a uniform `π`, leaving the ranking to the
/// transition probabilities and the lexicographic tie-break.
fn edge_frequencies(
    graph: &ColoredGraph,
    probabilities: Option<&BTreeMap<String, BTreeMap<String, f64>>>,
) -> Result<BTreeMap<(String, String), f64>> {
    let model = match probabilities {
        Some(rows) => Some(model_from_probabilities(graph, rows)?),
        None => tracking::uniform_model(graph, StartMode::Uniform).ok(),
    };
    let n = graph.node_count();
    let mut frequencies = BTreeMap::new();
    match model {
        Some(model) => {
            let pi = long_run_distribution(&model).unwrap_or_else(|| vec![1.0 / n as f64; n]);
            for &(u, v) in graph.edges() {
                frequencies.insert(
                    (graph.node_id(u).to_string(), graph.node_id(v).to_string()),
                    pi[u] * model.transition(u, v),
                );
            }
        }
        None => {
            for &(u, v) in graph.edges() {
                frequencies.insert(
                    (graph.node_id(u).to_string(), graph.node_id(v).to_string()),
                    1.0 / graph.edge_count() as f64,
                );
            }
        }
    }
    Ok(frequencies)
}

/// Builds a model from explicit per-edge probabilities (row-stochastic over
/// each node's out-edges) and a uniform initial distribution.
fn model_from_probabilities(
    graph: &ColoredGraph,
    rows: &BTreeMap<String, BTreeMap<String, f64>>,
) -> Result<HmmModel> {
    for (u, row) in rows {
        let Some(from) = graph.index_of(u) else {
            return Err(Error::InvalidInput(format!(
                "probability row for unknown node {u:?}"
            )));
        };
        for v in row.keys() {
            let known = graph
                .index_of(v)
                .is_some_and(|to| graph.has_edge(from, to));
            if !known {
                return Err(Error::InvalidInput(format!(
                    "probability given for ({u}, {v}), which is not an edge"
                )));
            }
        }
    }
    let trans: Vec<Vec<f64>> = graph
        .node_indices()
        .map(|u| {
            let uid = graph.node_id(u);
            graph
                .out_neighbors(u)
                .iter()
                .map(|&v| {
                    rows.get(uid)
                        .and_then(|row| row.get(graph.node_id(v)))
                        .copied()
                        .ok_or_else(|| {
                            Error::InvalidInput(format!(
                                "missing probability for edge ({uid}, {})",
                                graph.node_id(v)
                            ))
                        })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = graph.node_count();
    let initial: Vec<f64> = match graph.start_nodes() {
        Some(starts) => {
            let w = 1.0 / starts.len() as f64;
            graph
                .node_indices()
                .map(|v| if starts.contains(&v) { w } else { 0.0 })
                .collect()
        }
        None => vec![1.0 / n as f64; n],
    };
    HmmModel::new(graph.clone(), trans, initial)
}

/// Long-run state distribution via power iteration on the lazy chain
/// `(P + I) / 2`, which shares `π` with `P` but is always aperiodic.
/// `None` when the chain is not irreducible (no unique `π` exists).
fn long_run_distribution(model: &HmmModel) -> Option<Vec<f64>> {
    let graph = model.graph();
    let n = graph.node_count();
    let adj: Vec<Vec<usize>> = graph
        .node_indices()
        .map(|v| graph.out_neighbors(v).to_vec())
        .collect();
    if auxiliary::tarjan_sccs(&adj).len() != 1 {
        return None;
    }
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let mut next = vec![0.0; n];
        for u in 0..n {
            next[u] += 0.5 * pi[u];
            for &v in graph.out_neighbors(u) {
                next[v] += 0.5 * pi[u] * model.transition(u, v);
            }
        }
        let delta: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < 1e-12 {
            break;
        }
    }
    Some(pi)
}

/// Witness-guided heuristic search.
///
/// Each iteration obtains witnesses for the pathology blocking `target` on
/// the current graph, intersects their edges with the remaining candidates,
/// and inserts an indicator on the edge with the lowest long-run traversal
/// frequency (ties broken lexicographically).  Frequencies are computed
/// once, on the original graph.  Returns `None` when no candidate edge
/// touches any witness; otherwise the returned placement is verified by
/// re-classification.
pub fn solve_insp_greedy(
    graph: &ColoredGraph,
    candidates: &[(String, String)],
    target: TargetClass,
    indicator_color: IndicatorColor,
    probabilities: Option<&BTreeMap<String, BTreeMap<String, f64>>>,
) -> Result<Option<IndicatorPlacement>> {
    if let IndicatorColor::Existing(name) = &indicator_color {
        if graph.color_index(name).is_none() {
            return Err(Error::InvalidInput(format!(
                "indicator color {name:?} is not in the palette"
            )));
        }
    }
    if target == TargetClass::PartlyObservable {
        return Err(Error::InvalidInput(
            "partly_observable has no localized witness; use the exact solver".into(),
        ));
    }
    let mut remaining = canonical_candidates(graph, candidates)?;
    let frequencies = edge_frequencies(graph, probabilities)?;
    let mut current = graph.clone();
    let mut chosen: Vec<(String, String)> = Vec::new();
    loop {
        if meets_target(&current, target) {
            let placement = IndicatorPlacement::new(chosen, indicator_color);
            verify_placement(graph, &placement, target)?;
            return Ok(Some(placement));
        }
        let witness_sets = blocking_witness_edge_sets(&current, target)?;
        let pick = witness_sets.iter().find_map(|edges| {
            remaining
                .iter()
                .filter(|edge| edges.contains(*edge))
                .min_by(|a, b| {
                    let (fa, fb) = (frequencies[*a], frequencies[*b]);
                    if (fa - fb).abs() <= FREQUENCY_TOLERANCE {
                        a.cmp(b)
                    } else {
                        fa.partial_cmp(&fb).expect("frequencies are finite")
                    }
                })
                .cloned()
        });
        let Some(edge) = pick else {
            return Ok(None);
        };
        remaining.retain(|e| e != &edge);
        let step = IndicatorPlacement::new(vec![edge.clone()], indicator_color.clone());
        current = apply_indicators(&current, &step)?;
        chosen.push(edge);
    }
}
