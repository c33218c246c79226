//! Windowed Viterbi decoding.
//!
//! The decoder runs a forward max-product pass over a window of γ observed
//! colors and backtracks the best state path; the caller reads off the
//! state β positions before the window end.  Two scoring regimes:
//!
//! - Uniform models (every row uniform over its out-edges) with a uniform
//!   window-start distribution rank paths exactly: each path probability is
//!   a common factor times the reciprocal of a product of out-degrees, so
//!   paths compare by integer products and ties are detected exactly.
//! - General models compare natural-log scores with a relative tolerance
//!   of 1e-12.
//!
//! Ties always resolve toward the smaller node index — at every
//! backpointer and at the final state — so decoding is deterministic and
//! reproducible across runs and platforms.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::tracking::{stationary_distribution, HmmModel, SUM_TOLERANCE};

/// Relative tolerance for log-score tie detection on non-uniform models.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Decoder result: the queried estimate plus the whole best path.
#[derive(Debug, Clone, PartialEq)]
pub struct ViterbiOutcome {
    /// Best-path state at window position γ − β (1-based), i.e. β states
    /// before the window end.
    pub estimate: NodeId,
    /// The full best path, one state per window position.
    pub path: Vec<NodeId>,
    /// Natural log of the best path's probability.
    pub log_score: f64,
}

#[derive(Clone, Copy)]
struct Score {
    log: f64,
    /// Exact out-degree product along the path (smaller product = more
    /// probable) when exact ranking applies; `None` in log mode.
    denom: Option<u128>,
}

enum Cmp {
    Better,
    Tie,
    Worse,
}

fn compare(candidate: &Score, incumbent: &Score) -> Cmp {
    if let (Some(a), Some(b)) = (candidate.denom, incumbent.denom) {
        return match a.cmp(&b) {
            std::cmp::Ordering::Less => Cmp::Better,
            std::cmp::Ordering::Equal => Cmp::Tie,
            std::cmp::Ordering::Greater => Cmp::Worse,
        };
    }
    let tol = TIE_TOLERANCE * candidate.log.abs().max(incumbent.log.abs()).max(1.0);
    if (candidate.log - incumbent.log).abs() <= tol {
        Cmp::Tie
    } else if candidate.log > incumbent.log {
        Cmp::Better
    } else {
        Cmp::Worse
    }
}

/// Windowed Viterbi with the default window-start distribution: the
/// model's stationary distribution.
pub fn viterbi_window(model: &HmmModel, colors: &[usize], beta: usize) -> Result<ViterbiOutcome> {
    let dist = stationary_distribution(model)?;
    viterbi_window_with_dist(model, colors, beta, &dist)
}

/// Windowed Viterbi with an explicit window-start distribution.
pub fn viterbi_window_with_dist(
    model: &HmmModel,
    colors: &[usize],
    beta: usize,
    dist: &[f64],
) -> Result<ViterbiOutcome> {
    let graph = model.graph();
    let n = graph.node_count();
    let gamma = colors.len();
    if gamma == 0 {
        return Err(Error::InvalidInput("window must contain at least one color".into()));
    }
    if beta >= gamma {
        return Err(Error::InvalidInput(format!(
            "lag {beta} must be smaller than the window length {gamma}"
        )));
    }
    if dist.len() != n {
        return Err(Error::InvalidInput(
            "window-start distribution must cover every node".into(),
        ));
    }
    let total: f64 = dist.iter().sum();
    if dist.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(
            "window-start distribution must be a probability vector".into(),
        ));
    }

    // Exact ranking applies when transition rows are uniform and the start
    // weights are a common constant on their support.
    let support: Vec<f64> = dist.iter().copied().filter(|&p| p > 0.0).collect();
    let exact = model.has_uniform_rows()
        && !support.is_empty()
        && support
            .iter()
            .all(|&p| (p - support[0]).abs() <= SUM_TOLERANCE);

    let mut scores: Vec<Option<Score>> = (0..n)
        .map(|v| {
            if graph.colors(v).contains(colors[0]) && dist[v] > 0.0 {
                Some(Score {
                    log: dist[v].ln(),
                    denom: if exact { Some(1) } else { None },
                })
            } else {
                None
            }
        })
        .collect();
    if scores.iter().all(Option::is_none) {
        return Err(Error::InvalidInput(
            "window colors are impossible for this model (position 1)".into(),
        ));
    }
    let mut backpointers: Vec<Vec<Option<NodeId>>> = Vec::with_capacity(gamma);
    backpointers.push(vec![None; n]);

    for (t, &color) in colors.iter().enumerate().skip(1) {
        let mut next: Vec<Option<Score>> = vec![None; n];
        let mut back: Vec<Option<NodeId>> = vec![None; n];
        for u in 0..n {
            let Some(s) = scores[u] else { continue };
            for (i, &v) in graph.out_neighbors(u).iter().enumerate() {
                if !graph.colors(v).contains(color) {
                    continue;
                }
                let p = model.transition_row(u)[i];
                let candidate = Score {
                    log: s.log + p.ln(),
                    denom: s.denom.and_then(|d| d.checked_mul(graph.out_degree(u) as u128)),
                };
                match &next[v] {
                    None => {
                        next[v] = Some(candidate);
                        back[v] = Some(u);
                    }
                    Some(incumbent) => match compare(&candidate, incumbent) {
                        Cmp::Better => {
                            next[v] = Some(candidate);
                            back[v] = Some(u);
                        }
                        // Predecessors are scanned in ascending order, so
                        // the incumbent already has the smaller index.
                        Cmp::Tie | Cmp::Worse => {}
                    },
                }
            }
        }
        if next.iter().all(Option::is_none) {
            return Err(Error::InvalidInput(format!(
                "window colors are impossible for this model (position {})",
                t + 1
            )));
        }
        scores = next;
        backpointers.push(back);
    }

    let mut best: Option<(NodeId, Score)> = None;
    for v in 0..n {
        let Some(s) = scores[v] else { continue };
        match &best {
            None => best = Some((v, s)),
            Some((_, incumbent)) => {
                if matches!(compare(&s, incumbent), Cmp::Better) {
                    best = Some((v, s));
                }
            }
        }
    }
    let (end, end_score) = best.expect("at least one state survives the last layer");

    let mut path = vec![end];
    for t in (1..gamma).rev() {
        let prev = backpointers[t][*path.last().unwrap()]
            .expect("every surviving state has a backpointer");
        path.push(prev);
    }
    path.reverse();

    Ok(ViterbiOutcome {
        estimate: path[gamma - 1 - beta],
        path,
        log_score: end_score.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tracking::{uniform_model, StartMode};

    #[test]
    fn two_cycle_window_decodes_uniquely() {
        let g = fixtures::two_cycle();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let r = g.color_index("Red").unwrap();
        let b = g.color_index("Blue").unwrap();
        let dist = vec![0.5, 0.5];
        let out = viterbi_window_with_dist(&m, &[r, b], 0, &dist).unwrap();
        assert_eq!(g.node_id(out.estimate), "b");
        assert_eq!(out.path.len(), 2);
        let out = viterbi_window_with_dist(&m, &[r, b], 1, &dist).unwrap();
        assert_eq!(g.node_id(out.estimate), "a");
    }

    #[test]
    fn g_intersect_tie_breaks_to_r1() {
        let g = fixtures::g_intersect();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let blue = g.color_index("Blue").unwrap();
        let red = g.color_index("Red").unwrap();
        // Exact tie under a uniform start distribution.
        let uniform = vec![1.0 / 3.0; 3];
        let out = viterbi_window_with_dist(&m, &[blue, red], 0, &uniform).unwrap();
        assert_eq!(g.node_id(out.estimate), "r1");
        // Log-mode tie under the hand-solved stationary vector.
        let b = g.index_of("b").unwrap();
        let r1 = g.index_of("r1").unwrap();
        let r2 = g.index_of("r2").unwrap();
        let mut pi = vec![0.0; 3];
        pi[b] = 0.5;
        pi[r1] = 0.25;
        pi[r2] = 0.25;
        let out = viterbi_window_with_dist(&m, &[blue, red], 0, &pi).unwrap();
        assert_eq!(g.node_id(out.estimate), "r1");
    }

    #[test]
    fn g_intersect_three_window_is_certain() {
        let g = fixtures::g_intersect();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let blue = g.color_index("Blue").unwrap();
        let red = g.color_index("Red").unwrap();
        let uniform = vec![1.0 / 3.0; 3];
        let out = viterbi_window_with_dist(&m, &[blue, red, blue], 2, &uniform).unwrap();
        assert_eq!(g.node_id(out.estimate), "b");
    }

    #[test]
    fn impossible_window_is_an_error() {
        let g = fixtures::two_cycle();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let r = g.color_index("Red").unwrap();
        let err =
            viterbi_window_with_dist(&m, &[r, r], 0, &[0.5, 0.5]).unwrap_err();
        assert!(err.to_string().contains("impossible"));
        assert!(viterbi_window_with_dist(&m, &[], 0, &[0.5, 0.5]).is_err());
        assert!(viterbi_window_with_dist(&m, &[r], 1, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn default_distribution_is_stationary() {
        // Aperiodic three-node graph: a self-loop plus a 2-cycle.
        let g = crate::graph::ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue"])],
            &[("a", "a"), ("a", "b"), ("b", "a")],
            None,
        )
        .unwrap();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let r = g.color_index("Red").unwrap();
        let b = g.color_index("Blue").unwrap();
        let out = viterbi_window(&m, &[r, b], 0).unwrap();
        assert_eq!(g.node_id(out.estimate), "b");
        // π = (2/3, 1/3); best path is a→b with probability (2/3)·(1/2).
        assert!((out.log_score - (2.0f64 / 3.0 * 0.5).ln()).abs() < 1e-9);
    }

    #[test]
    fn matches_brute_force_on_small_windows() {
        let g = fixtures::g_scon();
        let m = uniform_model(&g, StartMode::Uniform).unwrap();
        let palette_len = g.palette().len();
        // All color windows of length 3 and 4; compare against exhaustive
        // enumeration with the initial distribution as window start.
        let dist = m.initial_distribution().to_vec();
        for len in 3..=4usize {
            let mut stack = vec![Vec::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == len {
                    let fast = viterbi_window_with_dist(&m, &prefix, 0, &dist);
                    let slow = crate::brute::brute_viterbi(&m, &prefix);
                    match (fast, slow) {
                        (Ok(out), Some((path, _))) => {
                            assert_eq!(out.path, path, "window {prefix:?}");
                        }
                        (Err(_), None) => {}
                        (fast, slow) => {
                            panic!("disagreement on {prefix:?}: {fast:?} vs {slow:?}")
                        }
                    }
                    continue;
                }
                for c in 0..palette_len {
                    let mut next = prefix.clone();
                    next.push(c);
                    stack.push(next);
                }
            }
        }
    }
}
