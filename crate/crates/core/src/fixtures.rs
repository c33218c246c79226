//! Bundled example graphs.
//!
//! These small graphs exercise every region of the observability taxonomy
//! and are used throughout the test-suite, benchmarks, and documentation:
//!
//! - `g_sym`: a four-node two-colored cycle whose two opposite phases form a
//!   separated cycle pair (semi-unifilar but not observable).
//! - `g_intersect`: a blue hub with two red return nodes; the canonical
//!   intersecting-cycles graph with exponential hypothesis growth.
//! - `g_scon`: a hub whose two red successors are distinguished one step
//!   later; same-colored out-neighbors without intersecting cycles.
//! - `butterfly_base` and its mitigated variants: a 13-node graph with a
//!   central blue node, two four-node red branches returning to it, and two
//!   green/orange two-cycles hanging below.  The base graph exhibits every
//!   pathology; `butterfly_trackable`, `butterfly_semi_unifilar`, and
//!   `butterfly_observable` insert indicator nodes one pathology at a time.
//!   The observable variant declares the four lower nodes as start nodes.
//! - `region_2` / `region_3` / `region_4`: small graphs pinned to taxonomy
//!   regions that the named graphs above do not cover.
//! - `two_cycle`: the two-node alternating-color cycle, observable with
//!   burn-in 0.

use crate::graph::ColoredGraph;

pub const G_SYM_JSON: &str = include_str!("../fixtures/g_sym.json");
pub const G_INTERSECT_JSON: &str = include_str!("../fixtures/g_intersect.json");
pub const G_SCON_JSON: &str = include_str!("../fixtures/g_scon.json");
pub const BUTTERFLY_BASE_JSON: &str = include_str!("../fixtures/butterfly_base.json");
pub const BUTTERFLY_TRACKABLE_JSON: &str = include_str!("../fixtures/butterfly_trackable.json");
pub const BUTTERFLY_SEMI_UNIFILAR_JSON: &str =
    include_str!("../fixtures/butterfly_semi_unifilar.json");
pub const BUTTERFLY_OBSERVABLE_JSON: &str = include_str!("../fixtures/butterfly_observable.json");
pub const REGION_2_JSON: &str = include_str!("../fixtures/region_2.json");
pub const REGION_3_JSON: &str = include_str!("../fixtures/region_3.json");
pub const REGION_4_JSON: &str = include_str!("../fixtures/region_4.json");
pub const TWO_CYCLE_JSON: &str = include_str!("../fixtures/two_cycle.json");

fn parse(json: &str) -> ColoredGraph {
    crate::io::graph_from_json(json).expect("bundled fixture is valid")
}

pub fn g_sym() -> ColoredGraph {
    parse(G_SYM_JSON)
}

pub fn g_intersect() -> ColoredGraph {
    parse(G_INTERSECT_JSON)
}

pub fn g_scon() -> ColoredGraph {
    parse(G_SCON_JSON)
}

pub fn butterfly_base() -> ColoredGraph {
    parse(BUTTERFLY_BASE_JSON)
}

pub fn butterfly_trackable() -> ColoredGraph {
    parse(BUTTERFLY_TRACKABLE_JSON)
}

pub fn butterfly_semi_unifilar() -> ColoredGraph {
    parse(BUTTERFLY_SEMI_UNIFILAR_JSON)
}

pub fn butterfly_observable() -> ColoredGraph {
    parse(BUTTERFLY_OBSERVABLE_JSON)
}

pub fn region_2() -> ColoredGraph {
    parse(REGION_2_JSON)
}

pub fn region_3() -> ColoredGraph {
    parse(REGION_3_JSON)
}

pub fn region_4() -> ColoredGraph {
    parse(REGION_4_JSON)
}

pub fn two_cycle() -> ColoredGraph {
    parse(TWO_CYCLE_JSON)
}

/// All bundled fixtures as `(name, graph)` pairs.
pub fn all_fixtures() -> Vec<(&'static str, ColoredGraph)> {
    vec![
        ("g_sym", g_sym()),
        ("g_intersect", g_intersect()),
        ("g_scon", g_scon()),
        ("butterfly_base", butterfly_base()),
        ("butterfly_trackable", butterfly_trackable()),
        ("butterfly_semi_unifilar", butterfly_semi_unifilar()),
        ("butterfly_observable", butterfly_observable()),
        ("region_2", region_2()),
        ("region_3", region_3()),
        ("region_4", region_4()),
        ("two_cycle", two_cycle()),
    ]
}

/// The designated fixture for each taxonomy region, I through VIII.
pub fn region_fixtures() -> [(&'static str, ColoredGraph); 8] {
    [
        ("butterfly_base", butterfly_base()),
        ("region_2", region_2()),
        ("region_3", region_3()),
        ("region_4", region_4()),
        ("g_intersect", g_intersect()),
        ("g_scon", g_scon()),
        ("g_sym", g_sym()),
        ("two_cycle", two_cycle()),
    ]
}
