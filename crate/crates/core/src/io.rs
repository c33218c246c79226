//! JSON and DOT serialization for colored graphs.
//!
//! JSON is the primary interchange format and follows the documented schema
//! (`palette` / `nodes` / `edges` / optional `start_nodes`).  DOT output is
//! meant for Graphviz rendering but is also fully round-trippable: the
//! palette and start set are recorded as `graph` attributes and every node
//! line carries a `colors` attribute, so `load(save(g))` reproduces `g`
//! exactly.  The only caveat is that color names containing commas cannot be
//! represented in the comma-joined DOT attributes (JSON has no such limit).
//!
//! Rendering attributes are derived from the palette deterministically:
//!
//! - `fillcolor`: if the lowercased palette name is a well-known X11 color
//!   (see [`X11_KNOWN`]) it is used directly; otherwise the palette index
//!   selects from the fixed fallback table [`X11_FALLBACK`] (cyclically).
//! - `shape`: the palette index selects from the fixed table [`SHAPES`]
//!   (cyclically).  Multi-colored nodes render with their first color.
//! - start nodes additionally get `peripheries=2`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{
    ColoredEdgeDoc, ColoredGraph, EdgeColoredGraph, EdgeDoc, EdgeGraphDoc, GraphDoc, NodeDoc,
};

/// Serialization formats understood by [`save_graph`] and [`load_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

/// X11 color names that palette entries map onto verbatim (case-insensitive).
pub const X11_KNOWN: &[&str] = &[
    "red", "blue", "green", "orange", "yellow", "purple", "cyan", "magenta", "brown", "pink",
    "gray", "grey", "black", "white", "gold", "violet", "salmon", "turquoise", "coral", "khaki",
    "plum", "navy", "maroon", "teal", "silver", "indigo", "crimson", "chocolate", "orchid",
    "tomato",
];

/// Fallback fill colors for palette names that are not X11 colors, selected
/// by palette index modulo table length.
pub const X11_FALLBACK: &[&str] = &[
    "lightblue",
    "lightsalmon",
    "palegreen",
    "lightgoldenrod",
    "thistle",
    "lightgray",
    "wheat",
    "lightcyan",
    "mistyrose",
    "lavender",
    "honeydew",
    "peachpuff",
    "azure",
    "cornsilk",
    "gainsboro",
    "aliceblue",
];

/// Node shapes, selected by palette index modulo table length.
pub const SHAPES: &[&str] = &[
    "ellipse",
    "box",
    "diamond",
    "hexagon",
    "octagon",
    "trapezium",
    "parallelogram",
    "house",
    "invtriangle",
    "oval",
];

/// The Graphviz fill color used for palette entry `index` named `name`.
pub fn fill_color(name: &str, index: usize) -> &'static str {
    let lower = name.to_ascii_lowercase();
    if let Some(known) = X11_KNOWN.iter().find(|c| **c == lower) {
        known
    } else {
        X11_FALLBACK[index % X11_FALLBACK.len()]
    }
}

/// The Graphviz node shape used for palette entry `index`.
pub fn shape_for(index: usize) -> &'static str {
    SHAPES[index % SHAPES.len()]
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

fn json_parse_error(err: serde_json::Error) -> Error {
    Error::Parse {
        message: err.to_string(),
        line: Some(err.line()).filter(|&l| l > 0),
    }
}

pub fn graph_to_json(graph: &ColoredGraph) -> String {
    let mut text = serde_json::to_string_pretty(&graph.to_doc()).expect("graph doc serializes");
    text.push('\n');
    text
}

pub fn graph_from_json(text: &str) -> Result<ColoredGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(json_parse_error)?;
    doc.compile()
}

pub fn edge_graph_to_json(graph: &EdgeColoredGraph) -> String {
    let mut text = serde_json::to_string_pretty(&graph.to_doc()).expect("graph doc serializes");
    text.push('\n');
    text
}

pub fn edge_graph_from_json(text: &str) -> Result<EdgeColoredGraph> {
    let doc: EdgeGraphDoc = serde_json::from_str(text).map_err(json_parse_error)?;
    doc.compile()
}

// ---------------------------------------------------------------------------
// DOT emission
// ---------------------------------------------------------------------------

fn dot_header(out: &mut String, name: &str, palette: &[String], starts: Option<Vec<String>>) {
    let _ = writeln!(out, "digraph {name} {{");
    let mut graph_attrs = format!("palette=\"{}\"", escape(&palette.join(",")));
    if let Some(starts) = starts {
        let _ = write!(
            graph_attrs,
            ", start_nodes=\"{}\"",
            escape(&starts.join(","))
        );
    }
    let _ = writeln!(out, "  graph [{graph_attrs}];");
}

pub fn graph_to_dot(graph: &ColoredGraph) -> String {
    let mut out = String::new();
    let starts = graph
        .start_nodes()
        .map(|s| s.iter().map(|&v| graph.node_id(v).to_string()).collect());
    dot_header(&mut out, "colored_graph", graph.palette(), starts);
    let _ = writeln!(out, "  node [style=filled];");
    for v in graph.node_indices() {
        let colors = graph.color_names(v).join(",");
        let first = graph.colors(v).iter().next().expect("node has a color");
        let mut attrs = format!(
            "colors=\"{}\", fillcolor=\"{}\", shape={}",
            escape(&colors),
            fill_color(graph.color_name(first), first),
            shape_for(first)
        );
        if graph.is_start(v) {
            attrs.push_str(", peripheries=2");
        }
        let _ = writeln!(out, "  \"{}\" [{attrs}];", escape(graph.node_id(v)));
    }
    for &(u, v) in graph.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            escape(graph.node_id(u)),
            escape(graph.node_id(v))
        );
    }
    out.push_str("}\n");
    out
}

pub fn edge_graph_to_dot(graph: &EdgeColoredGraph) -> String {
    let mut out = String::new();
    let starts = graph
        .start_nodes()
        .map(|s| s.iter().map(|&v| graph.node_id(v).to_string()).collect());
    dot_header(&mut out, "edge_colored_graph", graph.palette(), starts);
    for v in graph.node_indices() {
        let mut attrs = String::new();
        if graph.is_start(v) {
            attrs.push_str(" [peripheries=2]");
        }
        let _ = writeln!(out, "  \"{}\"{attrs};", escape(graph.node_id(v)));
    }
    for &(u, v, colors) in graph.edges() {
        let names: Vec<&str> = colors
            .iter()
            .map(|i| graph.palette()[i].as_str())
            .collect();
        let first = colors.iter().next().expect("edge has a color");
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [colors=\"{}\", color=\"{}\"];",
            escape(graph.node_id(u)),
            escape(graph.node_id(v)),
            escape(&names.join(",")),
            fill_color(&graph.palette()[first], first)
        );
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// DOT parsing (line-oriented, covers exactly the emitted subset)
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
struct DotAttrs {
    pairs: Vec<(String, String)>,
}

impl DotAttrs {
    fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn parse_err(line_no: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        message: message.into(),
        line: Some(line_no),
    }
}

/// Parses a quoted or bare token starting at `chars[pos]`; returns the token
/// and the index one past its end.
fn parse_token(line: &str, pos: usize, line_no: usize) -> Result<(String, usize)> {
    let bytes = line.as_bytes();
    if pos >= bytes.len() {
        return Err(parse_err(line_no, "unexpected end of line"));
    }
    if bytes[pos] == b'"' {
        let mut out = String::new();
        let mut i = pos + 1;
        while i < bytes.len() {
            match bytes[i] {
                b'\\' => {
                    if i + 1 >= bytes.len() {
                        return Err(parse_err(line_no, "dangling escape in quoted string"));
                    }
                    out.push(bytes[i + 1] as char);
                    i += 2;
                }
                b'"' => return Ok((out, i + 1)),
                _ => {
                    let ch_start = i;
                    let ch_len = line[ch_start..]
                        .chars()
                        .next()
                        .map(|c| c.len_utf8())
                        .unwrap_or(1);
                    out.push_str(&line[ch_start..ch_start + ch_len]);
                    i += ch_len;
                }
            }
        }
        Err(parse_err(line_no, "unterminated quoted string"))
    } else {
        let start = pos;
        let mut i = pos;
        while i < bytes.len()
            && !matches!(bytes[i], b' ' | b',' | b';' | b'[' | b']' | b'=')
        {
            i += 1;
        }
        if i == start {
            return Err(parse_err(line_no, "expected token"));
        }
        Ok((line[start..i].to_string(), i))
    }
}

fn skip_spaces(line: &str, mut pos: usize) -> usize {
    let bytes = line.as_bytes();
    while pos < bytes.len() && bytes[pos] == b' ' {
        pos += 1;
    }
    pos
}

/// Parses `key=value, key=value, ...]` starting just inside the `[`.
fn parse_attrs(line: &str, mut pos: usize, line_no: usize) -> Result<(DotAttrs, usize)> {
    let mut attrs = DotAttrs::default();
    let bytes = line.as_bytes();
    loop {
        pos = skip_spaces(line, pos);
        if pos < bytes.len() && bytes[pos] == b']' {
            return Ok((attrs, pos + 1));
        }
        let (key, next) = parse_token(line, pos, line_no)?;
        pos = skip_spaces(line, next);
        if pos >= bytes.len() || bytes[pos] != b'=' {
            return Err(parse_err(line_no, format!("expected '=' after key {key}")));
        }
        let (value, next) = parse_token(line, skip_spaces(line, pos + 1), line_no)?;
        attrs.pairs.push((key, value));
        pos = skip_spaces(line, next);
        match bytes.get(pos) {
            Some(b',') => pos += 1,
            Some(b']') => return Ok((attrs, pos + 1)),
            _ => return Err(parse_err(line_no, "expected ',' or ']' in attribute list")),
        }
    }
}

fn split_names(joined: &str) -> Vec<String> {
    if joined.is_empty() {
        Vec::new()
    } else {
        joined.split(',').map(|s| s.to_string()).collect()
    }
}

#[derive(Debug)]
enum DotStatement {
    GraphAttrs(DotAttrs),
    NodeDefaults,
    Node { id: String, attrs: DotAttrs },
    Edge { from: String, to: String, attrs: DotAttrs },
}

fn parse_statement(line: &str, line_no: usize) -> Result<DotStatement> {
    let trimmed = line.trim();
    let body = trimmed.strip_suffix(';').unwrap_or(trimmed);
    if let Some(rest) = body.strip_prefix("graph ") {
        let rest = rest.trim_start();
        let inner = rest
            .strip_prefix('[')
            .ok_or_else(|| parse_err(line_no, "expected '[' after graph"))?;
        let (attrs, _) = parse_attrs(inner, 0, line_no)?;
        return Ok(DotStatement::GraphAttrs(attrs));
    }
    if body.starts_with("node ") {
        return Ok(DotStatement::NodeDefaults);
    }
    let (first, pos) = parse_token(body, 0, line_no)?;
    let pos = skip_spaces(body, pos);
    if body[pos..].starts_with("->") {
        let (to, pos) = parse_token(body, skip_spaces(body, pos + 2), line_no)?;
        let pos = skip_spaces(body, pos);
        let attrs = if body[pos..].starts_with('[') {
            parse_attrs(body, pos + 1, line_no)?.0
        } else if body[pos..].is_empty() {
            DotAttrs::default()
        } else {
            return Err(parse_err(line_no, "trailing content after edge"));
        };
        return Ok(DotStatement::Edge { from: first, to, attrs });
    }
    let attrs = if body[pos..].starts_with('[') {
        parse_attrs(body, pos + 1, line_no)?.0
    } else if body[pos..].is_empty() {
        DotAttrs::default()
    } else {
        return Err(parse_err(line_no, "trailing content after node id"));
    };
    Ok(DotStatement::Node { id: first, attrs })
}

struct ParsedDot {
    palette: Vec<String>,
    start_nodes: Option<Vec<String>>,
    nodes: Vec<(String, DotAttrs)>,
    edges: Vec<(String, String, DotAttrs)>,
}

fn parse_dot(text: &str) -> Result<ParsedDot> {
    let mut lines = text.lines().enumerate();
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty DOT input"))?;
    let first = first.trim();
    if !(first.starts_with("digraph") && first.ends_with('{')) {
        return Err(parse_err(first_no + 1, "expected 'digraph <name> {'"));
    }

    let mut parsed = ParsedDot {
        palette: Vec::new(),
        start_nodes: None,
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    let mut closed = false;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if closed {
            return Err(parse_err(line_no, "content after closing '}'"));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        match parse_statement(line, line_no)? {
            DotStatement::GraphAttrs(attrs) => {
                if let Some(p) = attrs.get("palette") {
                    parsed.palette = split_names(p);
                }
                if let Some(s) = attrs.get("start_nodes") {
                    parsed.start_nodes = Some(split_names(s));
                }
            }
            DotStatement::NodeDefaults => {}
            DotStatement::Node { id, attrs } => parsed.nodes.push((id, attrs)),
            DotStatement::Edge { from, to, attrs } => parsed.edges.push((from, to, attrs)),
        }
    }
    if !closed {
        return Err(parse_err(
            text.lines().count(),
            "missing closing '}'",
        ));
    }
    Ok(parsed)
}

pub fn graph_from_dot(text: &str) -> Result<ColoredGraph> {
    let parsed = parse_dot(text)?;
    let doc = GraphDoc {
        palette: parsed.palette,
        nodes: parsed
            .nodes
            .into_iter()
            .map(|(id, attrs)| NodeDoc {
                colors: attrs.get("colors").map(split_names).unwrap_or_default(),
                id,
            })
            .collect(),
        edges: parsed
            .edges
            .into_iter()
            .map(|(from, to, _)| EdgeDoc { from, to })
            .collect(),
        start_nodes: parsed.start_nodes,
    };
    doc.compile()
}

pub fn edge_graph_from_dot(text: &str) -> Result<EdgeColoredGraph> {
    let parsed = parse_dot(text)?;
    let doc = EdgeGraphDoc {
        palette: parsed.palette,
        nodes: parsed.nodes.into_iter().map(|(id, _)| id).collect(),
        edges: parsed
            .edges
            .into_iter()
            .map(|(from, to, attrs)| ColoredEdgeDoc {
                colors: attrs.get("colors").map(split_names).unwrap_or_default(),
                from,
                to,
            })
            .collect(),
        start_nodes: parsed.start_nodes,
    };
    doc.compile()
}

// ---------------------------------------------------------------------------
// Convenience wrappers
// ---------------------------------------------------------------------------

pub fn save_graph(graph: &ColoredGraph, format: Format) -> String {
    match format {
        Format::Json => graph_to_json(graph),
        Format::Dot => graph_to_dot(graph),
    }
}

pub fn load_graph(text: &str, format: Format) -> Result<ColoredGraph> {
    match format {
        Format::Json => graph_from_json(text),
        Format::Dot => graph_from_dot(text),
    }
}

pub fn save_edge_graph(graph: &EdgeColoredGraph, format: Format) -> String {
    match format {
        Format::Json => edge_graph_to_json(graph),
        Format::Dot => edge_graph_to_dot(graph),
    }
}

pub fn load_edge_graph(text: &str, format: Format) -> Result<EdgeColoredGraph> {
    match format {
        Format::Json => edge_graph_from_json(text),
        Format::Dot => edge_graph_from_dot(text),
    }
}

pub fn load_graph_file(path: &Path, format: Format) -> Result<ColoredGraph> {
    load_graph(&std::fs::read_to_string(path)?, format)
}

pub fn load_edge_graph_file(path: &Path, format: Format) -> Result<EdgeColoredGraph> {
    load_edge_graph(&std::fs::read_to_string(path)?, format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredGraph;

    fn sample() -> ColoredGraph {
        ColoredGraph::build(
            &["Red", "Blue"],
            &[("a", &["Red"]), ("b", &["Blue", "Red"])],
            &[("a", "b"), ("b", "a"), ("b", "b")],
            Some(&["a"]),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip() {
        let g = sample();
        assert_eq!(graph_from_json(&graph_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn json_parse_error_carries_line() {
        let err = graph_from_json("{\n  \"palette\": [,]\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, Some(2)),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn dot_round_trip() {
        let g = sample();
        let dot = graph_to_dot(&g);
        assert_eq!(graph_from_dot(&dot).unwrap(), g);
    }

    #[test]
    fn dot_contains_expected_attributes() {
        let dot = graph_to_dot(&sample());
        assert!(dot.contains("palette=\"Red,Blue\""));
        assert!(dot.contains("fillcolor=\"red\""));
        assert!(dot.contains("shape=ellipse"));
        assert!(dot.contains("peripheries=2"));
        assert!(dot.contains("\"a\" -> \"b\";"));
    }

    #[test]
    fn single_node_dot_has_color_attribute() {
        let g = ColoredGraph::build(&["Teal"], &[("only", &["Teal"])], &[], None).unwrap();
        let dot = graph_to_dot(&g);
        let node_lines: Vec<&str> = dot
            .lines()
            .filter(|l| l.trim_start().starts_with("\"only\""))
            .collect();
        assert_eq!(node_lines.len(), 1);
        assert!(node_lines[0].contains("colors=\"Teal\""));
    }

    #[test]
    fn fallback_fill_colors_are_deterministic() {
        assert_eq!(fill_color("Red", 0), "red");
        assert_eq!(fill_color("widget", 0), X11_FALLBACK[0]);
        assert_eq!(fill_color("widget", 3), X11_FALLBACK[3]);
    }

    #[test]
    fn dot_parse_error_reports_line() {
        let text = "digraph g {\n  graph [palette=\"R\"];\n  \"a\" [colors=\"R\" oops];\n}\n";
        match graph_from_dot(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, Some(3)),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn quoted_ids_with_escapes_round_trip() {
        let g = ColoredGraph::build(
            &["Red"],
            &[("we\"ird", &["Red"]), ("pl\\ain", &["Red"])],
            &[("we\"ird", "pl\\ain")],
            None,
        )
        .unwrap();
        assert_eq!(graph_from_dot(&graph_to_dot(&g)).unwrap(), g);
    }

    #[test]
    fn edge_colored_dot_round_trip() {
        let g = crate::graph::EdgeColoredGraph::build(
            &["Red", "Blue"],
            &["a", "b"],
            &[("a", "b", &["Red", "Blue"]), ("b", "a", &["Blue"])],
            Some(&["a"]),
        )
        .unwrap();
        let dot = edge_graph_to_dot(&g);
        assert_eq!(edge_graph_from_dot(&dot).unwrap(), g);
    }

    #[test]
    fn empty_start_list_round_trips_distinct_from_none() {
        let with_empty = ColoredGraph::build(&["Red"], &[("a", &["Red"])], &[], Some(&[])).unwrap();
        let without = ColoredGraph::build(&["Red"], &[("a", &["Red"])], &[], None).unwrap();
        assert_ne!(with_empty, without);
        assert_eq!(graph_from_dot(&graph_to_dot(&with_empty)).unwrap(), with_empty);
        assert_eq!(graph_from_dot(&graph_to_dot(&without)).unwrap(), without);
        assert_eq!(graph_from_json(&graph_to_json(&with_empty)).unwrap(), with_empty);
    }
}
