//! HMM simulation over colored graphs: models, trajectory sampling,
//! windowed Viterbi decoding, accuracy surfaces, and hypothesis growth.
//!
//! A [`HmmModel`] pairs a single-colored graph with a row-stochastic
//! transition matrix whose support is exactly the edge set, plus an initial
//! distribution.  Emissions are degenerate: each node emits its one color.
//! Everything downstream — sampling, decoding, accuracy surfaces — is
//! deterministic given a seed; independent trials draw from per-trial
//! random streams so parallel schedules cannot change results.

mod currency;
mod growth;
mod viterbi;

pub use currency::{currency_surface, CurrencySurface, SurfaceCell, WindowAnchor};
pub use growth::{growth_class, GrowthMode, GrowthReport, GrowthVerdict, DEFAULT_GROWTH_BUDGET};
pub use viterbi::{viterbi_window, viterbi_window_with_dist, ViterbiOutcome};

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, NodeId};

/// Tolerance for row sums and distribution sums.
pub const SUM_TOLERANCE: f64 = 1e-12;
/// Power-iteration convergence tolerance for stationary distributions.
pub const STATIONARY_TOLERANCE: f64 = 1e-10;
/// Power-iteration cap.
pub const STATIONARY_MAX_ITERS: usize = 1_000_000;

/// An HMM whose hidden chain walks a single-colored graph and whose
/// emission at a node is that node's color with probability one.
#[derive(Debug, Clone)]
pub struct HmmModel {
    graph: ColoredGraph,
    /// Per node, probabilities aligned with `graph.out_neighbors(node)`.
    trans: Vec<Vec<f64>>,
    initial: Vec<f64>,
    uniform_rows: bool,
    uniform_initial: bool,
}

impl HmmModel {
    /// Builds and validates a model.  `trans[v]` must align with
    /// `graph.out_neighbors(v)`.
    pub fn new(graph: ColoredGraph, trans: Vec<Vec<f64>>, initial: Vec<f64>) -> Result<Self> {
        if !graph.is_single_colored() {
            return Err(Error::InvalidInput(
                "model requires a single-colored graph".into(),
            ));
        }
        let n = graph.node_count();
        if trans.len() != n || initial.len() != n {
            return Err(Error::InvalidInput(
                "transition rows and initial distribution must cover every node".into(),
            ));
        }
        for v in graph.node_indices() {
            let row = &trans[v];
            if row.len() != graph.out_degree(v) {
                return Err(Error::InvalidInput(format!(
                    "transition row for {} does not match its out-edges",
                    graph.node_id(v)
                )));
            }
            if graph.out_degree(v) == 0 {
                return Err(Error::InvalidInput(format!(
                    "node {} has no outgoing edge; the chain would halt",
                    graph.node_id(v)
                )));
            }
            if row.iter().any(|&p| p <= 0.0 || !p.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "transition probabilities out of {} must be positive on every edge",
                    graph.node_id(v)
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidInput(format!(
                    "transition row for {} sums to {sum}, not 1",
                    graph.node_id(v)
                )));
            }
        }
        if initial.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidInput(
                "initial distribution must be non-negative".into(),
            ));
        }
        let total: f64 = initial.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "initial distribution sums to {total}, not 1"
            )));
        }
        if let Some(starts) = graph.start_nodes() {
            for v in graph.node_indices() {
                if initial[v] > 0.0 && !starts.contains(&v) {
                    return Err(Error::InvalidInput(format!(
                        "initial distribution puts mass on {}, outside the declared start nodes",
                        graph.node_id(v)
                    )));
                }
            }
        }
        let uniform_rows = (0..n).all(|v| {
            let d = trans[v].len() as f64;
            trans[v].iter().all(|&p| p == 1.0 / d)
        });
        let positive: Vec<f64> = initial.iter().copied().filter(|&p| p > 0.0).collect();
        let uniform_initial = positive
            .iter()
            .all(|&p| p == 1.0 / positive.len() as f64);
        Ok(HmmModel {
            graph,
            trans,
            initial,
            uniform_rows,
            uniform_initial,
        })
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    /// P(from → to); zero off the edge set.
    pub fn transition(&self, from: NodeId, to: NodeId) -> f64 {
        match self.graph.out_neighbors(from).binary_search(&to) {
            Ok(i) => self.trans[from][i],
            Err(_) => 0.0,
        }
    }

    /// Transition probabilities aligned with `graph.out_neighbors(from)`.
    pub fn transition_row(&self, from: NodeId) -> &[f64] {
        &self.trans[from]
    }

    pub fn initial(&self, node: NodeId) -> f64 {
        self.initial[node]
    }

    pub fn initial_distribution(&self) -> &[f64] {
        &self.initial
    }

    /// True when every row is uniform over its out-edges; such models admit
    /// exact tie detection in Viterbi scoring.
    pub fn has_uniform_rows(&self) -> bool {
        self.uniform_rows
    }

    /// True when the initial distribution is uniform over its support.
    pub fn has_uniform_initial(&self) -> bool {
        self.uniform_initial
    }

    /// FNV-1a hash of the graph document, transition matrix, and initial
    /// distribution; stable across runs and thread counts.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        let doc = crate::io::graph_to_json(&self.graph);
        eat(doc.as_bytes());
        for row in &self.trans {
            for &p in row {
                eat(&p.to_bits().to_le_bytes());
            }
        }
        for &p in &self.initial {
            eat(&p.to_bits().to_le_bytes());
        }
        h
    }
}

/// How `uniform_model` chooses the initial distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMode {
    /// Uniform over the declared start nodes, or over all nodes when no
    /// start set is declared.
    Uniform,
    /// The stationary distribution of the uniform chain.
    Stationary,
    /// Uniform over the declared start nodes; requires a start set.
    Subset,
}

/// Uniform-transition model: each out-edge of a node is equally likely.
pub fn uniform_model(graph: &ColoredGraph, start: StartMode) -> Result<HmmModel> {
    let n = graph.node_count();
    for v in graph.node_indices() {
        if graph.out_degree(v) == 0 {
            return Err(Error::InvalidInput(format!(
                "node {} has no outgoing edge; the chain would halt",
                graph.node_id(v)
            )));
        }
    }
    let trans: Vec<Vec<f64>> = (0..n)
        .map(|v| {
            let d = graph.out_degree(v) as f64;
            vec![1.0 / d; graph.out_degree(v)]
        })
        .collect();
    let initial = match start {
        StartMode::Uniform => match graph.start_nodes() {
            Some(starts) => {
                let w = 1.0 / starts.len() as f64;
                (0..n).map(|v| if starts.contains(&v) { w } else { 0.0 }).collect()
            }
            None => vec![1.0 / n as f64; n],
        },
        StartMode::Subset => {
            let starts = graph.start_nodes().ok_or_else(|| {
                Error::InvalidInput("subset start mode requires declared start nodes".into())
            })?;
            let w = 1.0 / starts.len() as f64;
            (0..n).map(|v| if starts.contains(&v) { w } else { 0.0 }).collect()
        }
        StartMode::Stationary => {
            let probe = HmmModel::new(graph.clone(), trans.clone(), vec![1.0 / n as f64; n])?;
            stationary_distribution(&probe)?
        }
    };
    HmmModel::new(graph.clone(), trans, initial)
}

/// Stationary distribution by power iteration (tolerance 1e-10, capped at
/// 10^6 sweeps), after checking that the chain restricted to the states
/// reachable from the initial support is irreducible and aperiodic.
pub fn stationary_distribution(model: &HmmModel) -> Result<Vec<f64>> {
    let graph = model.graph();
    let n = graph.node_count();

    // Reachable closure of the initial support.
    let mut reach = vec![false; n];
    let mut stack: Vec<NodeId> = graph
        .node_indices()
        .filter(|&v| model.initial(v) > 0.0)
        .collect();
    for &v in &stack {
        reach[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in graph.out_neighbors(v) {
            if !reach[w] {
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    let members: Vec<NodeId> = (0..n).filter(|&v| reach[v]).collect();

    // Irreducible: every reachable node must reach the whole reachable set.
    for &s in &members {
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in graph.out_neighbors(v) {
                if reach[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if members.iter().any(|&v| !seen[v]) {
            return Err(Error::InvalidInput(
                "chain is not irreducible on its reachable states; no unique stationary distribution"
                    .into(),
            ));
        }
    }

    // Aperiodic: gcd over edges of (depth(u) + 1 - depth(v)) must be 1.
    let root = members[0];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in graph.out_neighbors(v) {
            if reach[w] && depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut g: i64 = 0;
    for &(u, v) in graph.edges() {
        if reach[u] && reach[v] {
            let diff = depth[u] as i64 + 1 - depth[v] as i64;
            g = gcd(g, diff.abs());
        }
    }
    if g != 1 {
        return Err(Error::InvalidInput(format!(
            "chain is periodic (period {g}); power iteration would not converge"
        )));
    }

    let mut pi = vec![0.0; n];
    let w = 1.0 / members.len() as f64;
    for &v in &members {
        pi[v] = w;
    }
    for _ in 0..STATIONARY_MAX_ITERS {
        let mut next = vec![0.0; n];
        for &v in &members {
            for (i, &t) in graph.out_neighbors(v).iter().enumerate() {
                next[t] += pi[v] * model.transition_row(v)[i];
            }
        }
        let delta: f64 = (0..n).map(|v| (next[v] - pi[v]).abs()).sum();
        pi = next;
        if delta <= STATIONARY_TOLERANCE {
            return Ok(pi);
        }
    }
    Err(Error::InvalidInput(
        "power iteration did not converge within the iteration cap".into(),
    ))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A sampled hidden-state path and its emitted colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub states: Vec<NodeId>,
    pub colors: Vec<usize>,
}

/// Samples a trajectory of `len` steps: the first state from the initial
/// distribution, each next state from the current row of P.
pub fn sample<R: Rng>(model: &HmmModel, len: usize, rng: &mut R) -> Trajectory {
    assert!(len >= 1, "trajectories have at least one step");
    let graph = model.graph();
    let mut states = Vec::with_capacity(len);
    let mut colors = Vec::with_capacity(len);

    let first = draw(model.initial_distribution(), rng);
    states.push(first);
    while states.len() < len {
        let at = *states.last().unwrap();
        let row = model.transition_row(at);
        let pick = draw(row, rng);
        states.push(graph.out_neighbors(at)[pick]);
    }
    for &s in &states {
        colors.push(graph.colors(s).single());
    }
    Trajectory { states, colors }
}

/// Draws an index from a probability vector (probabilities over indices).
fn draw<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if x < acc {
            return i;
        }
    }
    // Guard against accumulated rounding at the top end.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .expect("weights must not be all zero")
}

/// Exact number of state sequences consistent with a color sequence, via
/// forward counting, with per-prefix totals for growth plots.  Counting
/// respects declared start nodes at the first position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCount {
    pub total: BigUint,
    pub per_step: Vec<BigUint>,
}

pub fn hypothesis_count(graph: &ColoredGraph, colors: &[usize]) -> HypothesisCount {
    if colors.is_empty() {
        return HypothesisCount {
            total: BigUint::from(0u32),
            per_step: Vec::new(),
        };
    }
    let n = graph.node_count();
    let mut counts: Vec<BigUint> = (0..n)
        .map(|v| {
            let eligible = graph.colors(v).contains(colors[0])
                && graph.start_nodes().is_none_or(|s| s.contains(&v));
            BigUint::from(u32::from(eligible))
        })
        .collect();
    let mut per_step = vec![counts.iter().sum::<BigUint>()];
    for &c in &colors[1..] {
        let mut next = vec![BigUint::from(0u32); n];
        for v in 0..n {
            if counts[v] == BigUint::from(0u32) {
                continue;
            }
            for &w in graph.out_neighbors(v) {
                if graph.colors(w).contains(c) {
                    next[w] += &counts[v];
                }
            }
        }
        counts = next;
        per_step.push(counts.iter().sum::<BigUint>());
    }
    HypothesisCount {
        total: per_step.last().cloned().unwrap(),
        per_step,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_cycle_uniform_model() {
        let m = uniform_model(&fixtures::two_cycle(), StartMode::Uniform).unwrap();
        assert_eq!(m.transition(0, 1), 1.0);
        assert_eq!(m.transition(1, 0), 1.0);
        assert_eq!(m.transition(0, 0), 0.0);
        assert!(m.has_uniform_rows());
    }

    #[test]
    fn two_cycle_stationary_is_periodic_error() {
        let err = uniform_model(&fixtures::two_cycle(), StartMode::Stationary).unwrap_err();
        assert!(err.to_string().contains("periodic"), "{err}");
    }

    #[test]
    fn self_loop_breaks_periodicity() {
        // a has a self-loop and an edge to b; b returns to a.
        let g = ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"])],
            &[("a", "a"), ("a", "b"), ("b", "a")],
            None,
        )
        .unwrap();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let pi = stationary_distribution(&m).unwrap();
        assert!((pi[0] - 2.0 / 3.0).abs() < 1e-9);
        assert!((pi[1] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn complete_k3_stationary_is_uniform() {
        let g = ColoredGraph::build(
            &["Red"],
            &[("a", &["Red"]), ("b", &["Red"]), ("c", &["Red"])],
            &[
                ("a", "b"),
                ("a", "c"),
                ("b", "a"),
                ("b", "c"),
                ("c", "a"),
                ("c", "b"),
            ],
            None,
        )
        .unwrap();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let pi = stationary_distribution(&m).unwrap();
        for &p in &pi {
            assert!((p - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn g_intersect_unique_stationary_vector_solves_balance() {
        // The chain is periodic, so power iteration refuses it; the unique
        // solution of the balance equations is still a valid model input.
        let g = fixtures::g_intersect();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let err = stationary_distribution(&m).unwrap_err();
        assert!(err.to_string().contains("periodic"));
        let b = g.index_of("b").unwrap();
        let r1 = g.index_of("r1").unwrap();
        let r2 = g.index_of("r2").unwrap();
        let mut pi = vec![0.0; 3];
        pi[b] = 0.5;
        pi[r1] = 0.25;
        pi[r2] = 0.25;
        // Check pi P = pi by hand.
        let mut next = vec![0.0; 3];
        for v in 0..3 {
            for (i, &t) in g.out_neighbors(v).iter().enumerate() {
                next[t] += pi[v] * m.transition_row(v)[i];
            }
        }
        for v in 0..3 {
            assert!((next[v] - pi[v]).abs() < 1e-15);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_respects_structure() {
        let m = uniform_model(&fixtures::g_intersect(), StartMode::Uniform).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        let t1 = sample(&m, 40, &mut r1);
        let t2 = sample(&m, 40, &mut r2);
        assert_eq!(t1, t2);
        let g = m.graph();
        for w in t1.states.windows(2) {
            assert!(g.has_edge(w[0], w[1]));
        }
        for (s, c) in t1.states.iter().zip(&t1.colors) {
            assert_eq!(g.colors(*s).single(), *c);
        }
    }

    #[test]
    fn g_intersect_alternates_from_b() {
        let mut doc = fixtures::g_intersect().to_doc();
        doc.start_nodes = Some(vec!["b".into()]);
        let g = doc.compile().unwrap();
        let m = uniform_model(&g, StartMode::Subset).unwrap();
        let blue = g.color_index("Blue").unwrap();
        let red = g.color_index("Red").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = sample(&m, 21, &mut rng);
        for (i, &c) in t.colors.iter().enumerate() {
            assert_eq!(c, if i % 2 == 0 { blue } else { red });
        }
    }

    #[test]
    fn subset_mode_needs_starts() {
        assert!(uniform_model(&fixtures::g_intersect(), StartMode::Subset).is_err());
    }

    #[test]
    fn butterfly_stationary_concentrates_on_reds() {
        let g = fixtures::butterfly_base();
        let m = uniform_model(&g, StartMode::Stationary).unwrap();
        let red = g.color_index("Red").unwrap();
        let red_mass: f64 = g
            .node_indices()
            .filter(|&v| g.colors(v).contains(red))
            .map(|v| m.initial(v))
            .sum();
        assert!(red_mass > 0.5, "red mass {red_mass}");
    }

    #[test]
    fn hypothesis_count_doubles_on_g_intersect() {
        let g = fixtures::g_intersect();
        let blue = g.color_index("Blue").unwrap();
        let red = g.color_index("Red").unwrap();
        for k in 0..6usize {
            let seq: Vec<usize> = (0..2 * k + 1)
                .map(|i| if i % 2 == 0 { blue } else { red })
                .collect();
            let hc = hypothesis_count(&g, &seq);
            assert_eq!(hc.total, BigUint::from(1u32) << k);
        }
    }

    #[test]
    fn hypothesis_count_examples() {
        let g = fixtures::g_sym();
        let r = g.color_index("Red").unwrap();
        let b = g.color_index("Blue").unwrap();
        let hc = hypothesis_count(&g, &[r, b, r, b, r]);
        assert_eq!(hc.total, BigUint::from(2u32));
        assert_eq!(hypothesis_count(&g, &[r, r]).total, BigUint::from(0u32));
        assert_eq!(hypothesis_count(&g, &[]).total, BigUint::from(0u32));
    }

    #[test]
    fn model_validation_catches_bad_rows() {
        let g = fixtures::two_cycle();
        // Row does not sum to one.
        let bad = HmmModel::new(g.clone(), vec![vec![0.5], vec![1.0]], vec![0.5, 0.5]);
        assert!(bad.is_err());
        // Initial distribution off by too much.
        let bad = HmmModel::new(g.clone(), vec![vec![1.0], vec![1.0]], vec![0.6, 0.6]);
        assert!(bad.is_err());
        // Dangling node.
        let dangling = ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"])],
            &[("a", "b")],
            None,
        )
        .unwrap();
        assert!(uniform_model(&dangling, StartMode::Uniform).is_err());
    }

    #[test]
    fn initial_support_outside_starts_is_rejected() {
        let mut doc = fixtures::two_cycle().to_doc();
        doc.start_nodes = Some(vec!["a".into()]);
        let g = doc.compile().unwrap();
        let err = HmmModel::new(g, vec![vec![1.0], vec![1.0]], vec![0.5, 0.5]).unwrap_err();
        assert!(err.to_string().contains("start nodes"));
    }

    #[test]
    fn fingerprint_is_stable_and_distinguishes_models() {
        let m1 = uniform_model(&fixtures::g_intersect(), StartMode::Uniform).unwrap();
        let m2 = uniform_model(&fixtures::g_intersect(), StartMode::Uniform).unwrap();
        assert_eq!(m1.fingerprint(), m2.fingerprint());
        let m3 = uniform_model(&fixtures::g_sym(), StartMode::Uniform).unwrap();
        assert_ne!(m1.fingerprint(), m3.fingerprint());
    }
}
