//! Brute-force reference implementations.
//!
//! Everything here trades efficiency for obviousness: detectors and
//! decoders written directly from their definitions, with no shared code
//! or data structures from the production paths they are meant to check.
//! They are exercised by the test suite on small instances and kept in the
//! library so external callers can run the same cross-checks.

use num_bigint::BigUint;
use rand::Rng;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::{ColoredGraph, NodeId};
use crate::tracking::HmmModel;

/// Same-colored out-neighbors, by the triple loop over node, color, and
/// neighbor pairs.
pub fn brute_scon(graph: &ColoredGraph) -> bool {
    for v in graph.node_indices() {
        for color in 0..graph.palette().len() {
            let mut emitters = 0;
            for &w in graph.out_neighbors(v) {
                if graph.colors(w).contains(color) {
                    emitters += 1;
                }
            }
            if emitters >= 2 {
                return true;
            }
        }
    }
    false
}

/// True when some position-wise color-compatible pair step exists from
/// `(u, v)` to `(x, y)`, reading edges and colors straight off the graph.
fn pair_step(graph: &ColoredGraph, from: (NodeId, NodeId), to: (NodeId, NodeId)) -> bool {
    graph.has_edge(from.0, to.0)
        && graph.has_edge(from.1, to.1)
        && graph.colors(to.0).intersects(graph.colors(to.1))
}

/// Separated-cycle oracle: two equal-length closed walks with position-wise
/// shared colors that never coincide, of length at most `max_len`.
///
/// Both walks may be rotated in lockstep, so it suffices to look for a
/// closed walk in ordered off-diagonal pair space that returns to its
/// starting pair.
pub fn brute_separated(graph: &ColoredGraph, max_len: usize) -> bool {
    let n = graph.node_count();
    for u in 0..n {
        for v in 0..n {
            if u == v || !graph.colors(u).intersects(graph.colors(v)) {
                continue;
            }
            // BFS over off-diagonal pairs, looking for a return to (u, v).
            let mut frontier = vec![(u, v)];
            let mut seen: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
            for _ in 0..max_len {
                let mut next = Vec::new();
                for &(a, b) in &frontier {
                    for x in 0..n {
                        for y in 0..n {
                            if x == y || !pair_step(graph, (a, b), (x, y)) {
                                continue;
                            }
                            if (x, y) == (u, v) {
                                return true;
                            }
                            if seen.insert((x, y)) {
                                next.push((x, y));
                            }
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                frontier = next;
            }
        }
    }
    false
}

/// Intersecting-cycle oracle: two distinct equal-length closed walks with
/// the same color sequence that coincide at some index, of length at most
/// `max_len`.
///
/// Rotating both walks so the coincidence sits at index 0 reduces this to
/// a closed walk in pair space from a diagonal pair back to itself that
/// passes through at least one off-diagonal pair.
pub fn brute_intersecting(graph: &ColoredGraph, max_len: usize) -> bool {
    let n = graph.node_count();
    for u in 0..n {
        // State: (pair, has the walk left the diagonal yet).
        let start = ((u, u), false);
        let mut frontier = vec![start];
        let mut seen: BTreeSet<((NodeId, NodeId), bool)> = BTreeSet::new();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for &((a, b), off_seen) in &frontier {
                for x in 0..n {
                    for y in 0..n {
                        if !pair_step(graph, (a, b), (x, y)) {
                            continue;
                        }
                        let state = ((x, y), off_seen || x != y);
                        if state == ((u, u), true) {
                            return true;
                        }
                        if seen.insert(state) {
                            next.push(state);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
    }
    false
}

/// Number of node paths consistent with a color-index sequence, by plain
/// depth-first enumeration.  When the graph declares start nodes, the first
/// position is restricted to them.
pub fn brute_count_paths(graph: &ColoredGraph, colors: &[usize]) -> BigUint {
    if colors.is_empty() {
        return BigUint::from(0u32);
    }
    fn extend(graph: &ColoredGraph, at: NodeId, rest: &[usize]) -> u64 {
        match rest.split_first() {
            None => 1,
            Some((&c, tail)) => graph
                .out_neighbors(at)
                .iter()
                .filter(|&&w| graph.colors(w).contains(c))
                .map(|&w| extend(graph, w, tail))
                .sum(),
        }
    }
    let mut total = 0u64;
    for v in graph.node_indices() {
        if graph.colors(v).contains(colors[0]) && graph.start_nodes().is_none_or(|s| s.contains(&v))
        {
            total += extend(graph, v, &colors[1..]);
        }
    }
    BigUint::from(total)
}

/// All color-name strings of exactly `len` symbols that some walk can emit.
/// Multi-colored nodes contribute every choice of emitted color.
pub fn node_language(graph: &ColoredGraph, len: usize) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    if len == 0 {
        return out;
    }
    fn extend(
        graph: &ColoredGraph,
        at: NodeId,
        prefix: &mut Vec<String>,
        len: usize,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        if prefix.len() == len {
            out.insert(prefix.clone());
            return;
        }
        for &w in graph.out_neighbors(at) {
            for c in graph.colors(w).iter() {
                prefix.push(graph.color_name(c).to_string());
                extend(graph, w, prefix, len, out);
                prefix.pop();
            }
        }
    }
    for v in graph.node_indices() {
        if let Some(starts) = graph.start_nodes() {
            if !starts.contains(&v) {
                continue;
            }
        }
        for c in graph.colors(v).iter() {
            let mut prefix = vec![graph.color_name(c).to_string()];
            extend(graph, v, &mut prefix, len, &mut out);
        }
    }
    out
}

/// All color-name strings of exactly `len` symbols emitted by edge
/// traversals of an edge-colored graph (walks of `len` edges).
pub fn edge_language(
    graph: &crate::graph::EdgeColoredGraph,
    len: usize,
) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    if len == 0 {
        return out;
    }
    fn extend(
        graph: &crate::graph::EdgeColoredGraph,
        at: NodeId,
        prefix: &mut Vec<String>,
        len: usize,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        if prefix.len() == len {
            out.insert(prefix.clone());
            return;
        }
        for &(w, colors) in graph.out_neighbors(at) {
            for c in colors.iter() {
                prefix.push(graph.color_name(c).to_string());
                extend(graph, w, prefix, len, out);
                prefix.pop();
            }
        }
    }
    for v in graph.node_indices() {
        if let Some(starts) = graph.start_nodes() {
            if !starts.contains(&v) {
                continue;
            }
        }
        let mut prefix = Vec::new();
        extend(graph, v, &mut prefix, len, &mut out);
    }
    out
}

/// Textbook full-sequence Viterbi by exhaustive path enumeration: the
/// maximum-probability state path for the color-index sequence, ties broken
/// by the lexicographically least reversed path (the same path a
/// backpointer pass choosing the smallest node index would produce).
///
/// Probabilities are compared exactly, so callers should stick to models
/// whose probabilities are dyadic rationals (uniform out-edge models with
/// uniform or subset starts).
pub fn brute_viterbi(model: &HmmModel, colors: &[usize]) -> Option<(Vec<NodeId>, f64)> {
    let graph = model.graph();
    let mut best: Option<(Vec<NodeId>, f64)> = None;
    fn reverse_lex_less(a: &[NodeId], b: &[NodeId]) -> bool {
        a.iter().rev().cmp(b.iter().rev()) == std::cmp::Ordering::Less
    }
    fn extend(
        model: &HmmModel,
        path: &mut Vec<NodeId>,
        prob: f64,
        rest: &[usize],
        best: &mut Option<(Vec<NodeId>, f64)>,
    ) {
        let graph = model.graph();
        match rest.split_first() {
            None => {
                let better = match best {
                    None => true,
                    Some((bp, bprob)) => {
                        prob > *bprob || (prob == *bprob && reverse_lex_less(path, bp))
                    }
                };
                if better {
                    *best = Some((path.clone(), prob));
                }
            }
            Some((&c, tail)) => {
                let at = *path.last().unwrap();
                for &w in graph.out_neighbors(at) {
                    if graph.colors(w).contains(c) {
                        path.push(w);
                        extend(model, path, prob * model.transition(at, w), tail, best);
                        path.pop();
                    }
                }
            }
        }
    }
    let (&first, rest) = colors.split_first()?;
    for v in graph.node_indices() {
        if graph.colors(v).contains(first) && model.initial(v) > 0.0 {
            let mut path = vec![v];
            extend(model, &mut path, model.initial(v), rest, &mut best);
        }
    }
    best
}

/// Burn-in bound by the subset-automaton construction: the longest
/// consistent observation sequence whose endpoint set still has two or
/// more candidates.  Returns `None` when ambiguity can persist forever
/// (the graph is then not observable from the given starts).
pub fn brute_burn_in(graph: &ColoredGraph) -> Option<usize> {
    // Initial subsets, one per color: all (start-eligible) nodes that can
    // emit it.
    let mut initial: Vec<BTreeSet<NodeId>> = Vec::new();
    for color in 0..graph.palette().len() {
        let set: BTreeSet<NodeId> = graph
            .node_indices()
            .filter(|&v| {
                graph.colors(v).contains(color)
                    && graph.start_nodes().is_none_or(|s| s.contains(&v))
            })
            .collect();
        if !set.is_empty() {
            initial.push(set);
        }
    }

    // Explore the reachable subset automaton.
    let mut states: Vec<BTreeSet<NodeId>> = Vec::new();
    let mut index: HashMap<BTreeSet<NodeId>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: BTreeSet<NodeId>,
                      states: &mut Vec<BTreeSet<NodeId>>,
                      queue: &mut VecDeque<usize>|
     -> usize {
        if let Some(&i) = index.get(&s) {
            return i;
        }
        let i = states.len();
        index.insert(s.clone(), i);
        states.push(s);
        queue.push_back(i);
        i
    };
    let init_ids: Vec<usize> = initial
        .into_iter()
        .map(|s| intern(s, &mut states, &mut queue))
        .collect();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let mut outs = Vec::new();
        for color in 0..graph.palette().len() {
            let next: BTreeSet<NodeId> = states[i]
                .iter()
                .flat_map(|&v| graph.out_neighbors(v).iter().copied())
                .filter(|&w| graph.colors(w).contains(color))
                .collect();
            if !next.is_empty() {
                outs.push(intern(next, &mut states, &mut queue));
            }
        }
        succ.push(outs);
        debug_assert_eq!(succ.len() - 1, i);
    }

    // Longest chain of ambiguous states from an ambiguous initial state;
    // a cycle among reachable ambiguous states means unbounded ambiguity.
    let ambiguous: Vec<bool> = states.iter().map(|s| s.len() >= 2).collect();
    let mut memo: Vec<Option<Option<usize>>> = vec![None; states.len()];
    let mut on_stack = vec![false; states.len()];
    // Longest ambiguous-only path (in transitions) starting at state i;
    // None encodes "infinite".
    fn longest(
        i: usize,
        succ: &[Vec<usize>],
        ambiguous: &[bool],
        memo: &mut [Option<Option<usize>>],
        on_stack: &mut [bool],
    ) -> Option<usize> {
        if !ambiguous[i] {
            return Some(0); // path ends before entering this state
        }
        if on_stack[i] {
            return None;
        }
        if let Some(cached) = memo[i] {
            return cached;
        }
        on_stack[i] = true;
        let mut best = 0usize;
        for &j in &succ[i] {
            if ambiguous[j] {
                match longest(j, succ, ambiguous, memo, on_stack) {
                    None => {
                        on_stack[i] = false;
                        memo[i] = Some(None);
                        return None;
                    }
                    Some(l) => best = best.max(1 + l),
                }
            }
        }
        on_stack[i] = false;
        memo[i] = Some(Some(best));
        Some(best)
    }

    let mut t = 0usize;
    for &i in &init_ids {
        if !ambiguous[i] {
            continue;
        }
        match longest(i, &succ, &ambiguous, &mut memo, &mut on_stack) {
            None => return None,
            // An ambiguous initial state is a length-1 ambiguous sequence.
            Some(l) => t = t.max(1 + l),
        }
    }
    Some(t)
}

/// Deterministic random graph for sweep tests: up to `max_nodes` nodes,
/// up to `max_colors` colors (palette `C0`, `C1`, …), random edges, an
/// occasional multi-colored node, and an occasional start set.
pub fn gen_small_graph<R: Rng>(rng: &mut R, max_nodes: usize, max_colors: usize) -> ColoredGraph {
    let n = rng.gen_range(1..=max_nodes);
    let k = rng.gen_range(1..=max_colors);
    let palette: Vec<String> = (0..k).map(|i| format!("C{i}")).collect();
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();

    let mut doc = crate::graph::GraphDoc {
        palette: palette.clone(),
        nodes: Vec::new(),
        edges: Vec::new(),
        start_nodes: None,
    };
    for name in &names {
        let mut colors = vec![palette[rng.gen_range(0..k)].clone()];
        // A second color now and then keeps the multi-color paths honest.
        if k > 1 && rng.gen_bool(0.15) {
            let extra = palette[rng.gen_range(0..k)].clone();
            if !colors.contains(&extra) {
                colors.push(extra);
            }
        }
        doc.nodes.push(crate::graph::NodeDoc {
            id: name.clone(),
            colors,
        });
    }
    let density = rng.gen_range(0.15..0.5);
    for from in &names {
        for to in &names {
            if rng.gen_bool(density) {
                doc.edges.push(crate::graph::EdgeDoc {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
        }
    }
    if rng.gen_bool(0.3) {
        let starts: Vec<String> = names.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !starts.is_empty() {
            doc.start_nodes = Some(starts);
        }
    }
    doc.compile().expect("generated graph is always valid")
}
