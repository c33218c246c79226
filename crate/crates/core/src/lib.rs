//! Observability analysis for node-colored directed graphs.
//!
//! The crate models systems whose hidden state moves along the edges of a
//! directed graph while an observer sees only the color of the current node.
//! It provides:
//!
//! - validated graph types and JSON/DOT serialization ([`graph`], [`io`]);
//! - reductions from multi-colored and edge-colored graphs to the
//!   single-colored node form ([`reduce`]);
//! - structural pathology detection (same-colored out-neighbors,
//!   intersecting cycles, separated cycles) with concrete witnesses
//!   ([`pathology`], [`auxiliary`]);
//! - an eight-region observability taxonomy ([`taxonomy`]);
//! - indicator-node mitigation search, both exact and greedy, plus the
//!   hardness reduction for minimum placement ([`mitigation`], [`insp`]);
//! - a chromatic upper bound on recoloring repairs ([`chromatic`]);
//! - hidden-Markov simulation with windowed decoding and tracking-quality
//!   surfaces ([`tracking`]);
//! - deliberately naive reference implementations for cross-checking
//!   ([`brute`]).

pub mod auxiliary;
pub mod brute;
pub mod chromatic;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod insp;
pub mod io;
pub mod mitigation;
pub mod pathology;
pub mod reduce;
pub mod taxonomy;
pub mod tracking;

pub use error::{Error, Result};
pub use graph::{
    ColorSet, ColoredEdgeDoc, ColoredGraph, EdgeColoredGraph, EdgeDoc, EdgeGraphDoc, GraphDoc,
    NodeData, NodeDoc, NodeId, Violation, MAX_COLORS,
};
