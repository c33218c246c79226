//! Observability classes and the eight-region taxonomy.
//!
//! Five boolean flags drive everything: the three pathology flags plus
//! acyclicity of G² and G̃².  Classes are definitional combinations:
//!
//! - Trackable ⇔ no intersecting cycles
//! - PartlyAPosterioriObservable ⇔ G² acyclic (⇔ no separated cycles)
//! - PartlyObservable ⇔ G̃² acyclic
//! - SemiUnifilar ⇔ no same-colored out-neighbors
//! - Observable ⇔ no SCON and no separated cycles
//!
//! The region label I–VIII is assigned by a fixed decision table
//! ([`region_from_flags`]); logically impossible flag combinations (for
//! example intersecting cycles without SCON) surface as internal errors
//! rather than arbitrary labels.  [`classify`] additionally asserts the
//! containment theorems (PartlyObservable ⊆ PartlyAPosterioriObservable,
//! SemiUnifilar ⊆ Trackable, Observable ⊆ SemiUnifilar) on every call.

use serde::Serialize;
use std::fmt;

use crate::auxiliary;
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::pathology::{self, PathologyReport};

/// Taxonomy region labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Region {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::V => "V",
            Region::VI => "VI",
            Region::VII => "VII",
            Region::VIII => "VIII",
        };
        f.write_str(s)
    }
}

/// Observability class names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ObservabilityClass {
    Trackable,
    PartlyAPosterioriObservable,
    PartlyObservable,
    SemiUnifilar,
    Observable,
    /// Unifilar with respect to the declared start set; only reported when
    /// the graph declares start nodes and all unifilar conditions hold.
    UnifilarGivenStart,
}

/// The five booleans the taxonomy is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassificationFlags {
    pub has_scon: bool,
    pub has_intersecting: bool,
    pub has_separated: bool,
    pub g2_acyclic: bool,
    pub g2tilde_acyclic: bool,
}

/// Full classification result.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub flags: ClassificationFlags,
    pub classes: Vec<ObservabilityClass>,
    pub region: Region,
    pub report: PathologyReport,
}

impl Classification {
    pub fn is(&self, class: ObservabilityClass) -> bool {
        self.classes.contains(&class)
    }
}

/// Assigns the taxonomy region for a flag combination, rejecting
/// combinations that cannot arise from any graph.
pub fn region_from_flags(flags: &ClassificationFlags) -> Result<Region> {
    if flags.g2_acyclic == flags.has_separated {
        return Err(Error::Internal(
            "flag consistency: G² acyclicity must mirror separated-cycle absence".into(),
        ));
    }
    if flags.has_intersecting && !flags.has_scon {
        return Err(Error::Internal(
            "infeasible flags: intersecting cycles require same-colored out-neighbors".into(),
        ));
    }
    if flags.g2tilde_acyclic && !flags.g2_acyclic {
        return Err(Error::Internal(
            "infeasible flags: G̃² is a supergraph of G², so it cannot be acyclic when G² is cyclic"
                .into(),
        ));
    }

    let trackable = !flags.has_intersecting;
    let semi_unifilar = !flags.has_scon;
    let observable = !flags.has_scon && !flags.has_separated;
    let partly_observable = flags.g2tilde_acyclic;

    let region = if observable {
        Region::VIII
    } else if semi_unifilar {
        Region::VII
    } else if partly_observable && trackable {
        Region::VI
    } else if partly_observable {
        Region::V
    } else if flags.g2_acyclic && trackable {
        Region::IV
    } else if flags.g2_acyclic && !trackable {
        Region::II
    } else if trackable {
        Region::III
    } else {
        Region::I
    };
    Ok(region)
}

/// Computes flags, classes, and region for a graph.
pub fn classify(graph: &ColoredGraph) -> Result<Classification> {
    let report = pathology::full_report(graph)?;
    let g2_acyclic = auxiliary::build_g2(graph).is_acyclic();
    let g2tilde_acyclic = auxiliary::build_g2_tilde(graph).is_acyclic();
    if g2_acyclic == report.has_separated {
        return Err(Error::Internal(
            "G² acyclicity disagrees with the separated-cycle detector".into(),
        ));
    }

    let flags = ClassificationFlags {
        has_scon: report.has_scon,
        has_intersecting: report.has_intersecting,
        has_separated: report.has_separated,
        g2_acyclic,
        g2tilde_acyclic,
    };
    let region = region_from_flags(&flags)?;

    let mut classes = Vec::new();
    if !flags.has_intersecting {
        classes.push(ObservabilityClass::Trackable);
    }
    if flags.g2_acyclic {
        classes.push(ObservabilityClass::PartlyAPosterioriObservable);
    }
    if flags.g2tilde_acyclic {
        classes.push(ObservabilityClass::PartlyObservable);
    }
    if !flags.has_scon {
        classes.push(ObservabilityClass::SemiUnifilar);
    }
    if !flags.has_scon && !flags.has_separated {
        classes.push(ObservabilityClass::Observable);
    }
    if graph.start_nodes().is_some() {
        let unifilar = is_unifilar(graph);
        if unifilar.unifilar {
            classes.push(ObservabilityClass::UnifilarGivenStart);
        }
    }

    let has = |c: ObservabilityClass| classes.contains(&c);
    if has(ObservabilityClass::PartlyObservable)
        && !has(ObservabilityClass::PartlyAPosterioriObservable)
    {
        return Err(Error::Internal(
            "containment violated: partly observable must imply partly a posteriori observable"
                .into(),
        ));
    }
    if has(ObservabilityClass::SemiUnifilar) && !has(ObservabilityClass::Trackable) {
        return Err(Error::Internal(
            "containment violated: semi-unifilar must imply trackable".into(),
        ));
    }
    if has(ObservabilityClass::Observable) && !has(ObservabilityClass::SemiUnifilar) {
        return Err(Error::Internal(
            "containment violated: observable must imply semi-unifilar".into(),
        ));
    }

    Ok(Classification {
        flags,
        classes,
        region,
        report,
    })
}

/// A violated unifilar condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum UnifilarViolation {
    /// Condition 1: the node emits more than one color.
    MultiColoredNode { node: String },
    /// Condition 2: two out-neighbors of `node` can emit `color`.
    SameColoredOutNeighbors {
        node: String,
        color: String,
        neighbors: Vec<String>,
    },
    /// Condition 3: more than one declared start node can emit `color`.
    MultipleStartEmitters { color: String, nodes: Vec<String> },
}

/// Result of the unifilar test.
#[derive(Debug, Clone, Serialize)]
pub struct UnifilarReport {
    pub unifilar: bool,
    pub violations: Vec<UnifilarViolation>,
    /// False when the graph declares no start set; condition 3 is then not
    /// evaluated rather than assumed.
    pub start_condition_evaluated: bool,
}

/// Checks the three unifilar conditions; condition 3 requires a start set.
pub fn is_unifilar(graph: &ColoredGraph) -> UnifilarReport {
    let mut violations = Vec::new();
    for v in graph.node_indices() {
        if graph.colors(v).len() != 1 {
            violations.push(UnifilarViolation::MultiColoredNode {
                node: graph.node_id(v).to_string(),
            });
        }
    }
    for entry in pathology::detect_scon(graph) {
        violations.push(UnifilarViolation::SameColoredOutNeighbors {
            node: entry.node,
            color: entry.color,
            neighbors: entry.neighbors,
        });
    }
    let start_condition_evaluated = graph.start_nodes().is_some();
    if let Some(starts) = graph.start_nodes() {
        for (color_idx, color) in graph.palette().iter().enumerate() {
            let emitters: Vec<String> = starts
                .iter()
                .filter(|&&v| graph.colors(v).contains(color_idx))
                .map(|&v| graph.node_id(v).to_string())
                .collect();
            if emitters.len() > 1 {
                violations.push(UnifilarViolation::MultipleStartEmitters {
                    color: color.clone(),
                    nodes: emitters,
                });
            }
        }
    }
    UnifilarReport {
        unifilar: violations.is_empty(),
        violations,
        start_condition_evaluated,
    }
}

/// Burn-in bound for observable graphs: after more than T observations the
/// current node is always unambiguous.
///
/// T is 1 plus the number of edges in the longest G² path that starts at a
/// color-compatible pair; when the graph declares start nodes, starting
/// pairs are further restricted to pairs of start nodes (ambiguity can only
/// be seeded at the first observation).  Returns `None` when the graph is
/// not observable.
pub fn compute_burn_in(graph: &ColoredGraph) -> Result<Option<usize>> {
    let classification = classify(graph)?;
    if !classification.is(ObservabilityClass::Observable) {
        return Ok(None);
    }
    let g2 = auxiliary::build_g2(graph);

    // Longest outgoing path (in edges) from every pair, by memoized DFS;
    // G² is acyclic here because the graph has no separated cycles.
    let n = g2.pair_count();
    let mut longest = vec![usize::MAX; n]; // MAX = unvisited
    fn dfs(v: usize, g2: &auxiliary::PairGraph, longest: &mut [usize]) -> usize {
        if longest[v] != usize::MAX {
            return longest[v];
        }
        longest[v] = 0; // placeholder; acyclicity makes revisits safe
        let mut best = 0;
        for &w in g2.neighbors(v) {
            best = best.max(1 + dfs(w, g2, longest));
        }
        longest[v] = best;
        best
    }

    let mut t = 0;
    for (idx, &(v1, v2)) in g2.pairs().iter().enumerate() {
        if !graph.colors(v1).intersects(graph.colors(v2)) {
            continue;
        }
        if let Some(starts) = graph.start_nodes() {
            if !starts.contains(&v1) || !starts.contains(&v2) {
                continue;
            }
        }
        t = t.max(1 + dfs(idx, &g2, &mut longest));
    }
    Ok(Some(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn region_fixtures_classify_to_their_regions() {
        let expected = [
            Region::I,
            Region::II,
            Region::III,
            Region::IV,
            Region::V,
            Region::VI,
            Region::VII,
            Region::VIII,
        ];
        for ((name, graph), want) in fixtures::region_fixtures().into_iter().zip(expected) {
            let got = classify(&graph).unwrap().region;
            assert_eq!(got, want, "fixture {name}: expected {want}, got {got}");
        }
    }

    #[test]
    fn butterfly_variants_progress_through_regions() {
        assert_eq!(classify(&fixtures::butterfly_base()).unwrap().region, Region::I);
        assert_eq!(
            classify(&fixtures::butterfly_trackable()).unwrap().region,
            Region::III
        );
        assert_eq!(
            classify(&fixtures::butterfly_semi_unifilar()).unwrap().region,
            Region::VII
        );
        assert_eq!(
            classify(&fixtures::butterfly_observable()).unwrap().region,
            Region::VIII
        );
    }

    #[test]
    fn g_sym_classes() {
        let c = classify(&fixtures::g_sym()).unwrap();
        assert!(c.is(ObservabilityClass::SemiUnifilar));
        assert!(c.is(ObservabilityClass::Trackable));
        assert!(!c.is(ObservabilityClass::PartlyAPosterioriObservable));
        assert!(!c.is(ObservabilityClass::Observable));
        assert_eq!(c.region, Region::VII);
    }

    #[test]
    fn region_table_is_total_and_rejects_infeasible_combos() {
        let mut feasible = 0;
        for bits in 0..32u32 {
            let flags = ClassificationFlags {
                has_scon: bits & 1 != 0,
                has_intersecting: bits & 2 != 0,
                has_separated: bits & 4 != 0,
                g2_acyclic: bits & 8 != 0,
                g2tilde_acyclic: bits & 16 != 0,
            };
            let consistent = flags.g2_acyclic != flags.has_separated;
            let feasible_combo = consistent
                && !(flags.has_intersecting && !flags.has_scon)
                && !(flags.g2tilde_acyclic && !flags.g2_acyclic);
            match region_from_flags(&flags) {
                Ok(_) => {
                    assert!(feasible_combo, "flags {flags:?} should have been rejected");
                    feasible += 1;
                }
                Err(Error::Internal(_)) => assert!(!feasible_combo),
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
        assert_eq!(feasible, 9);
    }

    #[test]
    fn region_table_spot_checks() {
        let f = |scon, int, sep, g2t| ClassificationFlags {
            has_scon: scon,
            has_intersecting: int,
            has_separated: sep,
            g2_acyclic: !sep,
            g2tilde_acyclic: g2t,
        };
        assert_eq!(region_from_flags(&f(false, false, false, true)).unwrap(), Region::VIII);
        assert_eq!(region_from_flags(&f(false, false, false, false)).unwrap(), Region::VIII);
        assert_eq!(region_from_flags(&f(false, false, true, false)).unwrap(), Region::VII);
        assert_eq!(region_from_flags(&f(true, false, false, true)).unwrap(), Region::VI);
        assert_eq!(region_from_flags(&f(true, true, false, true)).unwrap(), Region::V);
        assert_eq!(region_from_flags(&f(true, false, false, false)).unwrap(), Region::IV);
        assert_eq!(region_from_flags(&f(true, false, true, false)).unwrap(), Region::III);
        assert_eq!(region_from_flags(&f(true, true, false, false)).unwrap(), Region::II);
        assert_eq!(region_from_flags(&f(true, true, true, false)).unwrap(), Region::I);
    }

    #[test]
    fn unifilar_two_cycle_with_start() {
        let g = crate::graph::ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"])],
            &[("a", "b"), ("b", "a")],
            Some(&["a"]),
        )
        .unwrap();
        let report = is_unifilar(&g);
        assert!(report.unifilar);
        assert!(report.start_condition_evaluated);
    }

    #[test]
    fn unifilar_g_sym_with_conflicting_starts() {
        let mut doc = fixtures::g_sym().to_doc();
        doc.start_nodes = Some(vec!["a".into(), "c".into()]);
        let g = doc.compile().unwrap();
        let report = is_unifilar(&g);
        assert!(!report.unifilar);
        assert_eq!(
            report.violations,
            vec![UnifilarViolation::MultipleStartEmitters {
                color: "Red".into(),
                nodes: vec!["a".into(), "c".into()],
            }]
        );
    }

    #[test]
    fn unifilar_condition_one_on_multicolored_node() {
        let g = crate::graph::ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red", "Blue"]), ("c", &["Red"])],
            &[("a", "c"), ("c", "a")],
            None,
        )
        .unwrap();
        let report = is_unifilar(&g);
        assert!(!report.unifilar);
        assert!(matches!(
            report.violations[0],
            UnifilarViolation::MultiColoredNode { .. }
        ));
        assert!(!report.start_condition_evaluated);
    }

    #[test]
    fn burn_in_examples() {
        assert_eq!(compute_burn_in(&fixtures::two_cycle()).unwrap(), Some(0));
        // Observable three-cycle with two same-colored non-adjacent nodes.
        let three = crate::graph::ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"]), ("c", &["Red"])],
            &[("a", "b"), ("b", "c"), ("c", "a")],
            None,
        )
        .unwrap();
        assert_eq!(compute_burn_in(&three).unwrap(), Some(1));
        // Non-observable graphs have no burn-in.
        assert_eq!(compute_burn_in(&fixtures::g_sym()).unwrap(), None);
    }

    #[test]
    fn burn_in_of_observable_butterfly_respects_start_set() {
        assert_eq!(
            compute_burn_in(&fixtures::butterfly_observable()).unwrap(),
            Some(2)
        );
    }
}
