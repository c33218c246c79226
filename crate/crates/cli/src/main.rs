//! `graphtrack` — command-line front end for the observability toolkit.
//!
//! Every subcommand reads a graph (or instance) file, runs one analysis from
//! `graphtrack-core`, and prints a machine-readable result on stdout: JSON by
//! default, DOT for graph outputs under `--format dot`, CSV for the tabular
//! outputs of `simulate` and `hypcount`.  Diagnostics go to stderr only, so
//! stdout can be piped directly into `jq`, plotting scripts, or files.
//!
//! Exit codes form a stable contract for scripting:
//!
//! * `0` — success; the analysis produced a positive or neutral result.
//! * `1` — analysis-negative: the run succeeded but the answer is "no"
//!   (an invalid graph under `validate`, no pathology under `detect`, no
//!   feasible placement under `mitigate`).  A JSON explanation is still
//!   printed, distinguishing "false" from "failed".
//! * `2` — usage, I/O, parse, or validation failure.
//! * `3` — a configured search budget was exceeded.
//!
//! All randomness flows from `--seed` (default 0, never wall-clock), and
//! every subcommand is deterministic: identical inputs and seeds produce
//! byte-identical stdout, regardless of thread count.
//!
//! Input files are parsed by extension: `.dot` and `.gv` as Graphviz DOT,
//! everything else as JSON.  `--format` controls the output only.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use graphtrack_core::auxiliary::{build_g2, build_g2_tilde, DEFAULT_CYCLE_BUDGET};
use graphtrack_core::chromatic::chromatic_bound;
use graphtrack_core::error::{Error, Result};
use graphtrack_core::graph::ColoredGraph;
use graphtrack_core::insp::{build_insp_reduction, IndicatorColorMode, TriangleInstance};
use graphtrack_core::io::{self, Format};
use graphtrack_core::mitigation::{
    apply_indicators, solve_insp_exact, solve_insp_greedy, IndicatorColor, TargetClass,
};
use graphtrack_core::pathology;
use graphtrack_core::reduce::{reduce_edge_colored, reduce_multicolor};
use graphtrack_core::taxonomy;
use graphtrack_core::tracking::{
    self, currency_surface, growth_class, GrowthMode, StartMode, WindowAnchor,
    DEFAULT_GROWTH_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "graphtrack",
    version,
    about = "Observability analysis for node-colored directed graphs",
    long_about = "Classifies node-colored directed graphs into the eight-region observability \
                  taxonomy, searches indicator-node mitigations, and measures tracking quality \
                  empirically.  Input files are parsed by extension (.dot/.gv as DOT, otherwise \
                  JSON); --format controls the output.  Exit codes: 0 success, 1 analysis-negative \
                  (with a JSON explanation), 2 usage/IO/parse error, 3 budget exceeded."
)]
struct Cli {
    /// Output format; each subcommand documents which it accepts.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Seed for all randomized work; omitting it means seed 0, never wall-clock.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Search budget (cycle enumeration, candidate-set size, growth states).
    #[arg(long, global = true)]
    budget: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file and report violations without running any analysis.
    ///
    /// Valid graphs print a JSON summary and exit 0; structurally invalid
    /// graphs print the violation list and exit 1; unreadable or
    /// syntactically malformed files exit 2.
    Validate {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
        /// Which document kind to expect.
        #[arg(long, value_enum, default_value_t = GraphKind::Node)]
        kind: GraphKind,
    },

    /// Normalize an edge-colored or multi-colored graph to single-colored form.
    ///
    /// Prints the reduced graph (JSON or DOT); the node provenance map goes
    /// to stderr as a diagnostic.
    Reduce {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
        /// Input flavor to reduce from.
        #[arg(long, value_enum)]
        from: ReduceFrom,
    },

    /// Classify a graph into the observability taxonomy (region I-VIII).
    Classify {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
        /// Also write the auxiliary pair graphs as DOT files next to the
        /// input: <stem>.g2.dot and <stem>.g2tilde.dot.
        #[arg(long)]
        emit_aux: bool,
        /// Emit the JSON payload (the default; kept for script compatibility).
        #[arg(long)]
        json: bool,
    },

    /// Run the three pathology detectors and print witnesses.
    ///
    /// Exits 0 when at least one pathology is present, 1 when the graph is
    /// clean (the report is printed either way).
    Detect {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
        /// How many witnesses to list per pathology.
        #[arg(long, default_value_t = 1)]
        max_witnesses: usize,
    },

    /// Search an indicator-node placement that reaches a target class.
    ///
    /// Prints the placement with before/after classifications; exits 1 with
    /// a null placement when no candidate subset reaches the target.
    Mitigate {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
        /// Target class: trackable, partly_a_posteriori_observable,
        /// partly_observable, semi_unifilar, or observable.
        #[arg(long)]
        target: String,
        /// JSON file with candidate edges as [["u","v"], ...]; "all" (the
        /// default) uses every edge of the graph.
        #[arg(long, default_value = "all")]
        candidates: String,
        /// Solver: exhaustive minimum-cardinality search, or the
        /// witness-driven greedy heuristic.
        #[arg(long, value_enum, default_value_t = MitigateMode::Exact)]
        mode: MitigateMode,
        /// JSON file with transition probabilities {"u": {"v": p, ...}, ...}
        /// used by the greedy solver's edge-frequency weighting.
        #[arg(long)]
        probabilities: Option<PathBuf>,
        /// Indicator color: "fresh" mints a new color, any other value
        /// reuses that existing palette color.
        #[arg(long, default_value = "fresh")]
        indicator_color: String,
    },

    /// Estimate the (alpha, beta, gamma) accuracy surface by simulation.
    ///
    /// Prints CSV (beta,gamma,alpha,stderr); the JSON sidecar describing
    /// the run goes to stderr, or next to --output when writing a file.
    Simulate {
        /// Graph file (JSON or DOT); transitions are uniform per node.
        graph: PathBuf,
        /// Largest window start offset beta to sweep.
        #[arg(long, default_value_t = 10)]
        beta_max: usize,
        /// Largest window length gamma to sweep.
        #[arg(long, default_value_t = 50)]
        gamma_max: usize,
        /// Monte-Carlo trials per (beta, gamma) cell.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Window anchor: measure at the end of a long run, or at the start.
        #[arg(long, value_enum, default_value_t = AnchorArg::End)]
        anchor: AnchorArg,
        /// Initial distribution of the hidden chain.
        #[arg(long, value_enum, default_value_t = StartModeArg::Uniform)]
        start_mode: StartModeArg,
        /// Write the CSV here instead of stdout, plus a <file>.meta.json sidecar.
        #[arg(long)]
        output: Option<PathBuf>,
    },

    /// Count state sequences consistent with a color sequence, or measure
    /// how the worst-case count grows with sequence length.
    Hypcount {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
        /// Comma-separated color names, e.g. "Blue,Red,Blue".
        #[arg(long, required_unless_present = "growth", conflicts_with = "growth")]
        colors: Option<String>,
        /// Run the growth analysis instead of counting one sequence.
        #[arg(long)]
        growth: bool,
        /// Longest sequence length the growth analysis may reach.
        #[arg(long, default_value_t = 20)]
        length_cap: usize,
        /// Sample this many random color sequences per length instead of
        /// searching worst cases exhaustively.
        #[arg(long)]
        samples: Option<usize>,
    },

    /// Build the indicator-selection instance equivalent to a
    /// Monochromatic Triangle instance.
    ///
    /// The instance file is JSON: {"nodes": ["a", ...], "edges": [["a","b"], ...]}.
    ReduceInsp {
        /// Triangle instance file (JSON).
        instance: PathBuf,
        /// Whether indicators reuse an existing color or mint a fresh one.
        #[arg(long, value_enum, default_value_t = ColorModeArg::Fresh)]
        indicator_color_mode: ColorModeArg,
    },

    /// Bound the number of colors sufficient to make the graph partly a
    /// posteriori observable, and print the recoloring.
    ChromaticBound {
        /// Graph file (JSON or DOT).
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Node,
    Edge,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceFrom {
    EdgeColored,
    MultiColored,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MitigateMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnchorArg {
    End,
    Start,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StartModeArg {
    Uniform,
    Stationary,
    Subset,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColorModeArg {
    Existing,
    Fresh,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::Budget(_) => 3,
                _ => 2,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Validate { graph, kind } => cmd_validate(cli, graph, *kind),
        Command::Reduce { graph, from } => cmd_reduce(cli, graph, *from),
        Command::Classify {
            graph, emit_aux, ..
        } => cmd_classify(cli, graph, *emit_aux),
        Command::Detect {
            graph,
            max_witnesses,
        } => cmd_detect(cli, graph, *max_witnesses),
        Command::Mitigate {
            graph,
            target,
            candidates,
            mode,
            probabilities,
            indicator_color,
        } => cmd_mitigate(
            cli,
            graph,
            target,
            candidates,
            *mode,
            probabilities.as_deref(),
            indicator_color,
        ),
        Command::Simulate {
            graph,
            beta_max,
            gamma_max,
            trials,
            anchor,
            start_mode,
            output,
        } => cmd_simulate(
            cli,
            graph,
            *beta_max,
            *gamma_max,
            *trials,
            *anchor,
            *start_mode,
            output.as_deref(),
        ),
        Command::Hypcount {
            graph,
            colors,
            growth,
            length_cap,
            samples,
        } => cmd_hypcount(cli, graph, colors.as_deref(), *growth, *length_cap, *samples),
        Command::ReduceInsp {
            instance,
            indicator_color_mode,
        } => cmd_reduce_insp(cli, instance, *indicator_color_mode),
        Command::ChromaticBound { graph } => cmd_chromatic_bound(cli, graph),
    }
}

/// Infers the input parse format from the file extension.
fn input_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("dot") | Some("gv") => Format::Dot,
        _ => Format::Json,
    }
}

fn load_graph(path: &Path) -> Result<ColoredGraph> {
    io::load_graph_file(path, input_format(path))
}

/// Rejects output formats a subcommand does not produce.
fn check_format(
    requested: Option<OutputFormat>,
    allowed: &[OutputFormat],
    subcommand: &str,
) -> Result<OutputFormat> {
    let format = requested.unwrap_or(allowed[0]);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        let names: Vec<&str> = allowed
            .iter()
            .map(|f| match f {
                OutputFormat::Json => "json",
                OutputFormat::Dot => "dot",
                OutputFormat::Csv => "csv",
            })
            .collect();
        Err(Error::InvalidInput(format!(
            "{subcommand} emits {} output only",
            names.join(" or ")
        )))
    }
}

/// Writes to stdout, exiting quietly when the reading end of a pipe has
/// already closed (`graphtrack ... | head`); the `print!` macros would abort
/// with a panic message and backtrace on that same error.
fn write_stdout(text: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    let result = out.write_all(text.as_bytes()).and_then(|()| out.flush());
    if let Err(err) = result {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {err}");
    }
}

fn print_json(value: &serde_json::Value) {
    let mut text = serde_json::to_string_pretty(value).expect("serializable payload");
    text.push('\n');
    write_stdout(&text);
}

fn cmd_validate(cli: &Cli, path: &Path, kind: GraphKind) -> Result<u8> {
    check_format(cli.format, &[OutputFormat::Json], "validate")?;
    // Read first so that missing files are I/O errors (exit 2), then let the
    // loader separate syntax errors (exit 2) from structural violations
    // (exit 1 with the violation list).
    let text = fs::read_to_string(path)?;
    let format = input_format(path);
    let outcome = match kind {
        GraphKind::Node => match format {
            Format::Json => io::graph_from_json(&text),
            Format::Dot => io::graph_from_dot(&text),
        }
        .map(|g| {
            json!({
                "valid": true,
                "kind": "node",
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "palette": g.palette(),
                "start_nodes": g.start_nodes().map(|s| s.len()),
            })
        }),
        GraphKind::Edge => match format {
            Format::Json => io::edge_graph_from_json(&text),
            Format::Dot => io::edge_graph_from_dot(&text),
        }
        .map(|g| {
            json!({
                "valid": true,
                "kind": "edge",
                "nodes": g.node_count(),
                "palette": g.palette(),
                "start_nodes": g.start_nodes().map(|s| s.len()),
            })
        }),
    };
    match outcome {
        Ok(payload) => {
            print_json(&payload);
            Ok(0)
        }
        Err(Error::Validation(violations)) => {
            let messages: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            print_json(&json!({ "valid": false, "violations": messages }));
            Ok(1)
        }
        Err(other) => Err(other),
    }
}

fn cmd_reduce(cli: &Cli, path: &Path, from: ReduceFrom) -> Result<u8> {
    let format = check_format(
        cli.format,
        &[OutputFormat::Json, OutputFormat::Dot],
        "reduce",
    )?;
    let (reduced, provenance) = match from {
        ReduceFrom::EdgeColored => {
            let source = io::load_edge_graph_file(path, input_format(path))?;
            reduce_edge_colored(&source)?
        }
        ReduceFrom::MultiColored => {
            let source = load_graph(path)?;
            reduce_multicolor(&source)?
        }
    };
    let io_format = match format {
        OutputFormat::Json => Format::Json,
        _ => Format::Dot,
    };
    write_stdout(&ensure_newline(io::save_graph(&reduced, io_format)));
    eprintln!(
        "reduced to {} nodes, {} edges; provenance: {}",
        reduced.node_count(),
        reduced.edge_count(),
        serde_json::to_string(&provenance).expect("serializable provenance"),
    );
    Ok(0)
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn cmd_classify(cli: &Cli, path: &Path, emit_aux: bool) -> Result<u8> {
    check_format(cli.format, &[OutputFormat::Json], "classify")?;
    let graph = load_graph(path)?;
    let classification = taxonomy::classify(&graph)?;
    let burn_in = taxonomy::compute_burn_in(&graph)?;
    if emit_aux {
        let g2_path = path.with_extension("g2.dot");
        let g2t_path = path.with_extension("g2tilde.dot");
        fs::write(&g2_path, build_g2(&graph).to_dot(&graph))?;
        fs::write(&g2t_path, build_g2_tilde(&graph).to_dot(&graph))?;
        eprintln!(
            "wrote {} and {}",
            g2_path.display(),
            g2t_path.display()
        );
    }
    let mut payload = serde_json::to_value(&classification).expect("serializable classification");
    payload["burn_in"] = json!(burn_in);
    print_json(&payload);
    Ok(0)
}

fn cmd_detect(cli: &Cli, path: &Path, max_witnesses: usize) -> Result<u8> {
    check_format(cli.format, &[OutputFormat::Json], "detect")?;
    let graph = load_graph(path)?;
    let report = pathology::full_report(&graph)?;
    let intersecting = pathology::intersecting_witnesses(&graph, max_witnesses);
    let separated = pathology::separated_witnesses(&graph, max_witnesses);
    let found = report.has_scon || report.has_intersecting || report.has_separated;
    print_json(&json!({
        "has_scon": report.has_scon,
        "has_intersecting": report.has_intersecting,
        "has_separated": report.has_separated,
        "scon": report.scon,
        "intersecting": intersecting,
        "separated": separated,
    }));
    Ok(if found { 0 } else { 1 })
}

fn cmd_mitigate(
    cli: &Cli,
    path: &Path,
    target: &str,
    candidates: &str,
    mode: MitigateMode,
    probabilities: Option<&Path>,
    indicator_color: &str,
) -> Result<u8> {
    check_format(cli.format, &[OutputFormat::Json], "mitigate")?;
    let graph = load_graph(path)?;
    let target: TargetClass = target.parse()?;
    let candidate_edges: Vec<(String, String)> = if candidates == "all" {
        let mut edges = Vec::new();
        for v in graph.node_indices() {
            for &w in graph.out_neighbors(v) {
                edges.push((graph.node_id(v).to_string(), graph.node_id(w).to_string()));
            }
        }
        edges
    } else {
        let text = fs::read_to_string(candidates)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            message: format!("candidate file: {e}"),
            line: Some(e.line()),
        })?
    };
    let color = if indicator_color == "fresh" {
        IndicatorColor::Fresh
    } else {
        IndicatorColor::Existing(indicator_color.to_string())
    };
    let probability_rows: Option<BTreeMap<String, BTreeMap<String, f64>>> = match probabilities {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            Some(serde_json::from_str(&text).map_err(|e| Error::Parse {
                message: format!("probability file: {e}"),
                line: Some(e.line()),
            })?)
        }
        None => None,
    };
    if probability_rows.is_some() && mode == MitigateMode::Exact {
        return Err(Error::InvalidInput(
            "--probabilities only applies to the greedy solver".into(),
        ));
    }

    let before = taxonomy::classify(&graph)?;
    let placement = match mode {
        MitigateMode::Exact => {
            solve_insp_exact(&graph, &candidate_edges, target, color, cli.budget)?
        }
        MitigateMode::Greedy => solve_insp_greedy(
            &graph,
            &candidate_edges,
            target,
            color,
            probability_rows.as_ref(),
        )?,
    };
    let mode_name = match mode {
        MitigateMode::Exact => "exact",
        MitigateMode::Greedy => "greedy",
    };
    match placement {
        Some(placement) => {
            let mitigated = apply_indicators(&graph, &placement)?;
            let after = taxonomy::classify(&mitigated)?;
            print_json(&json!({
                "target": target.to_string(),
                "mode": mode_name,
                "placement": placement,
                "before": before,
                "after": after,
                "graph": mitigated.to_doc(),
            }));
            Ok(0)
        }
        None => {
            print_json(&json!({
                "target": target.to_string(),
                "mode": mode_name,
                "placement": serde_json::Value::Null,
                "before": before,
                "after": serde_json::Value::Null,
                "reason": "no candidate subset reaches the target class",
            }));
            Ok(1)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cli: &Cli,
    path: &Path,
    beta_max: usize,
    gamma_max: usize,
    trials: u64,
    anchor: AnchorArg,
    start_mode: StartModeArg,
    output: Option<&Path>,
) -> Result<u8> {
    check_format(cli.format, &[OutputFormat::Csv], "simulate")?;
    let graph = load_graph(path)?;
    let start = match start_mode {
        StartModeArg::Uniform => StartMode::Uniform,
        StartModeArg::Stationary => StartMode::Stationary,
        StartModeArg::Subset => StartMode::Subset,
    };
    let model = tracking::uniform_model(&graph, start)?;
    let anchor = match anchor {
        AnchorArg::End => WindowAnchor::End,
        AnchorArg::Start => WindowAnchor::Start,
    };
    let surface = currency_surface(&model, beta_max, gamma_max, trials, cli.seed, anchor)?;
    match output {
        Some(out) => {
            fs::write(out, surface.to_csv())?;
            let meta_path = out.with_extension("meta.json");
            fs::write(&meta_path, ensure_newline(surface.sidecar_json()))?;
            eprintln!("wrote {} and {}", out.display(), meta_path.display());
        }
        None => {
            write_stdout(&surface.to_csv());
            eprintln!("{}", surface.sidecar_json());
        }
    }
    Ok(0)
}

fn cmd_hypcount(
    cli: &Cli,
    path: &Path,
    colors: Option<&str>,
    growth: bool,
    length_cap: usize,
    samples: Option<usize>,
) -> Result<u8> {
    let graph = load_graph(path)?;
    if growth {
        check_format(cli.format, &[OutputFormat::Json], "hypcount --growth")?;
        let mode = match samples {
            Some(samples) => GrowthMode::Sampled {
                samples,
                seed: cli.seed,
            },
            None => GrowthMode::WorstCase,
        };
        let budget = cli.budget.unwrap_or(DEFAULT_GROWTH_BUDGET);
        let report = growth_class(&graph, length_cap, mode, budget)?;
        let counts: Vec<String> = report.max_counts.iter().map(|c| c.to_string()).collect();
        print_json(&json!({
            "verdict": report.verdict,
            "max_counts": counts,
            "evidence": report.evidence,
            "length_reached": report.length_reached,
            "doubling_step": report.doubling_step,
            "trackable": report.trackable,
        }));
        return Ok(0);
    }

    let format = check_format(
        cli.format,
        &[OutputFormat::Csv, OutputFormat::Json],
        "hypcount",
    )?;
    let spec = colors.expect("clap enforces --colors without --growth");
    let mut indices = Vec::new();
    let mut names = Vec::new();
    for name in spec.split(',') {
        let name = name.trim();
        let index = graph.color_index(name).ok_or_else(|| {
            Error::InvalidInput(format!("unknown color {name:?}; palette is {:?}", graph.palette()))
        })?;
        indices.push(index);
        names.push(name.to_string());
    }
    let count = tracking::hypothesis_count(&graph, &indices);
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("step,count\n");
            for (i, c) in count.per_step.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i + 1, c));
            }
            write_stdout(&out);
        }
        _ => {
            let per_step: Vec<String> = count.per_step.iter().map(|c| c.to_string()).collect();
            print_json(&json!({
                "colors": names,
                "total": count.total.to_string(),
                "per_step": per_step,
            }));
        }
    }
    Ok(0)
}

fn cmd_reduce_insp(cli: &Cli, path: &Path, mode: ColorModeArg) -> Result<u8> {
    let format = check_format(
        cli.format,
        &[OutputFormat::Json, OutputFormat::Dot],
        "reduce-insp",
    )?;
    let text = fs::read_to_string(path)?;
    #[derive(serde::Deserialize)]
    struct InstanceDoc {
        nodes: Vec<String>,
        edges: Vec<(String, String)>,
    }
    let doc: InstanceDoc = serde_json::from_str(&text).map_err(|e| Error::Parse {
        message: format!("instance file: {e}"),
        line: Some(e.line()),
    })?;
    let node_refs: Vec<&str> = doc.nodes.iter().map(String::as_str).collect();
    let edge_refs: Vec<(&str, &str)> = doc
        .edges
        .iter()
        .map(|(u, v)| (u.as_str(), v.as_str()))
        .collect();
    let instance = TriangleInstance::new(&node_refs, &edge_refs)?;
    let color_mode = match mode {
        ColorModeArg::Existing => IndicatorColorMode::Existing,
        ColorModeArg::Fresh => IndicatorColorMode::Fresh,
    };
    let reduction = build_insp_reduction(&instance, color_mode)?;
    match format {
        OutputFormat::Dot => write_stdout(&ensure_newline(io::graph_to_dot(&reduction.graph))),
        _ => print_json(&json!({
            "triangles": instance.triangle_count(),
            "graph": reduction.graph.to_doc(),
            "candidates": reduction.candidates,
            "indicator_color": reduction.indicator_color,
        })),
    }
    Ok(0)
}

fn cmd_chromatic_bound(cli: &Cli, path: &Path) -> Result<u8> {
    check_format(cli.format, &[OutputFormat::Json], "chromatic-bound")?;
    let graph = load_graph(path)?;
    let budget = cli.budget.unwrap_or(DEFAULT_CYCLE_BUDGET);
    let bound = chromatic_bound(&graph, budget)?;
    print_json(&json!({
        "bound": bound.bound,
        "selection": bound.selection,
        "coloring": bound.coloring,
        "recolored": bound.recolored.to_doc(),
    }));
    Ok(0)
}
