//! Command-line front end: parse graph / multiplicity / annotation files,
//! dispatch the library computations, and emit text, JSON, or DOT reports.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 validation error
//! (malformed files, unstable graphs, bad flag combinations), 3 budget
//! exceeded.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;

use ghostlab::age::{self, AgeError};
use ghostlab::counting;
use ghostlab::ghosts::{self, GhostError, DEFAULT_ORACLE_BUDGET};
use ghostlab::singularity::{self, CurveAnnotations};
use ghostlab::tails;
use ghostlab::{DualGraph, EdgeIdx, MultiplicityCochain, SymmetricFunction};

/// Appends one line to the report buffer (writing to a `String` cannot fail).
macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

/// Output format for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable lines.
    Text,
    /// Deterministic JSON (sorted keys).
    Json,
    /// Graphviz DOT (analyze only).
    Dot,
}

#[derive(Parser)]
#[command(
    name = "ghostlab",
    version,
    about = "Ghost automorphisms, ages, and singularity classification for level curves"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Scan budget for brute-force enumerations; overrides GHOSTLAB_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a graph, report its invariants, and optionally render the
    /// contraction towers as DOT.
    Analyze {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Multiplicity JSON file ({"level", "values"}).
        #[arg(long)]
        multiplicity: Option<PathBuf>,
        /// Level, when the multiplicity is embedded in the graph file or the
        /// zero cochain is intended.
        #[arg(long)]
        level: Option<u64>,
        /// Write the DOT rendering to this path.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Compute the ghost group of (graph, multiplicity).
    Ghosts {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Multiplicity JSON file.
        #[arg(long)]
        multiplicity: Option<PathBuf>,
        /// Level, when the multiplicity is embedded or zero.
        #[arg(long)]
        level: Option<u64>,
    },
    /// Compute the exact age and junior/senior verdict of an element.
    Age {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Multiplicity JSON file (enables the ghost-membership check).
        #[arg(long)]
        multiplicity: Option<PathBuf>,
        /// Level, when the multiplicity is embedded or zero.
        #[arg(long)]
        level: Option<u64>,
        /// Element JSON file ({"level", "values"}).
        #[arg(long)]
        element: PathBuf,
    },
    /// Classify the moduli point as smooth / canonical_singular / noncanonical.
    Classify {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Multiplicity JSON file.
        #[arg(long)]
        multiplicity: Option<PathBuf>,
        /// Level, when the multiplicity is embedded or zero.
        #[arg(long)]
        level: Option<u64>,
        /// Annotation JSON file ({"eti", "component_orders", "order3_tails"}).
        #[arg(long)]
        annotations: Option<PathBuf>,
    },
    /// Hunt junior ghosts: on one instance (--graph) or as an exhaustive
    /// sweep over all small graphs (--level with bounds).
    HuntJunior {
        /// Graph JSON file (single-instance mode).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Multiplicity JSON file (single-instance mode).
        #[arg(long)]
        multiplicity: Option<PathBuf>,
        /// Level (required in sweep mode, optional with embedded values).
        #[arg(long)]
        level: Option<u64>,
        /// Sweep bound: maximum edge count.
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        /// Sweep bound: maximum vertex count.
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
    },
    /// Produce a junior witness at a level, or certify that none exists.
    Witness {
        /// The level.
        #[arg(long)]
        level: u64,
    },
    /// Audit the fiber decomposition over a graph at a level.
    Fiber {
        /// Graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// The level.
        #[arg(long)]
        level: u64,
    },
    /// Degree bookkeeping for prime levels: forgetful and boundary degrees.
    Degrees {
        /// The genus (at least 2).
        #[arg(long)]
        genus: u32,
        /// The (prime) level.
        #[arg(long)]
        level: u64,
        /// Boundary index; omitted = all indices 1..=g/2.
        #[arg(long)]
        index: Option<u32>,
    },
    /// Run a named verification suite.
    Verify {
        /// Suite name; `paper-examples` runs the worked-example corpus.
        #[arg(long, default_value = "paper-examples")]
        suite: String,
    },
}

/// A top-level failure with its exit code.
enum CliError {
    /// Bad input: exit 2.
    Validation(String),
    /// Budget exhausted: exit 3.
    Budget(String),
    /// Verification mismatches: exit 1.
    Mismatch(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Validation(m) | CliError::Budget(m) => m.clone(),
            CliError::Mismatch(n) => format!("{n} verification check(s) failed"),
        }
    }
}

fn validation(err: impl std::fmt::Display) -> CliError {
    CliError::Validation(err.to_string())
}

fn ghost_error(err: GhostError) -> CliError {
    match err {
        GhostError::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn age_error(err: AgeError) -> CliError {
    CliError::Budget(err.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Loads a graph plus an optional multiplicity cochain.
///
/// The multiplicity comes from, in priority order: an explicit
/// `--multiplicity` file; a `"multiplicity"` object embedded in the graph
/// file (edge-id to value, with the level from `--level` or an embedded
/// `"level"` key); or `--level` alone (the zero cochain).
fn load_instance(
    graph_path: &Path,
    multiplicity_path: Option<&Path>,
    level_flag: Option<u64>,
) -> Result<(DualGraph, Option<MultiplicityCochain>), CliError> {
    let graph_text = read_file(graph_path)?;
    let graph = DualGraph::from_json_str(&graph_text).map_err(validation)?;
    // Structural validity only: ghost analysis is genus-independent, so the
    // CLI accepts graphs regardless of stability.
    graph.validate(false, 0).map_err(validation)?;
    if let Some(mp) = multiplicity_path {
        let m = MultiplicityCochain::from_json_str(&graph, &read_file(mp)?).map_err(validation)?;
        if let Some(flag) = level_flag {
            if flag != m.level() {
                return Err(CliError::Validation(format!(
                    "--level {flag} contradicts the multiplicity file's level {}",
                    m.level()
                )));
            }
        }
        return Ok((graph, Some(m)));
    }
    let raw: serde_json::Value = serde_json::from_str(&graph_text).map_err(validation)?;
    if let Some(embedded) = raw.get("multiplicity").and_then(|v| v.as_object()) {
        let level = level_flag
            .or_else(|| raw.get("level").and_then(|v| v.as_u64()))
            .ok_or_else(|| {
                CliError::Validation(
                    "graph file embeds multiplicity values but no level; pass --level".to_string(),
                )
            })?;
        let mut values = vec![0i64; graph.edge_count()];
        for (edge_id, value) in embedded {
            let e = graph.edge_idx(edge_id).ok_or_else(|| {
                CliError::Validation(format!(
                    "embedded multiplicity names unknown edge `{edge_id}`"
                ))
            })?;
            values[e.0] = value.as_i64().ok_or_else(|| {
                CliError::Validation(format!("multiplicity of `{edge_id}` is not an integer"))
            })?;
        }
        let m = MultiplicityCochain::from_values(&graph, level, &values).map_err(validation)?;
        return Ok((graph, Some(m)));
    }
    if let Some(level) = level_flag {
        let zero = MultiplicityCochain::from_values(&graph, level, &vec![0; graph.edge_count()])
            .map_err(validation)?;
        return Ok((graph, Some(zero)));
    }
    Ok((graph, None))
}

fn require_multiplicity(m: Option<MultiplicityCochain>) -> Result<MultiplicityCochain, CliError> {
    m.ok_or_else(|| {
        CliError::Validation(
            "this verb needs a multiplicity: pass --multiplicity, embed values in the graph \
             file, or pass --level for the zero cochain"
                .to_string(),
        )
    })
}

fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("GHOSTLAB_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

fn emit(out: &mut String, value: serde_json::Value) {
    outln!(
        out,
        "{}",
        serde_json::to_string_pretty(&value).expect("JSON serializes")
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = resolve_budget(cli.budget);
    let mut out = String::new();
    let result = run(&mut out, cli.verb, cli.format, budget);
    // Emit the buffered report once; ignore a closed pipe.
    {
        use std::io::Write as _;
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(out.as_bytes());
        let _ = stdout.flush();
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(out: &mut String, verb: Verb, format: Format, budget: u64) -> Result<(), CliError> {
    if format == Format::Dot && !matches!(verb, Verb::Analyze { .. }) {
        return Err(CliError::Validation(
            "--format dot is only available for `analyze`".to_string(),
        ));
    }
    match verb {
        Verb::Analyze {
            graph,
            multiplicity,
            level,
            emit_dot,
        } => {
            let (g, m) = load_instance(&graph, multiplicity.as_deref(), level)?;
            run_analyze(out, &g, m.as_ref(), format, emit_dot.as_deref())
        }
        Verb::Ghosts {
            graph,
            multiplicity,
            level,
        } => {
            let (g, m) = load_instance(&graph, multiplicity.as_deref(), level)?;
            let m = require_multiplicity(m)?;
            run_ghosts(out, &g, &m, format)
        }
        Verb::Age {
            graph,
            multiplicity,
            level,
            element,
        } => {
            let (g, m) = load_instance(&graph, multiplicity.as_deref(), level)?;
            let a =
                SymmetricFunction::from_json_str(&g, &read_file(&element)?).map_err(ghost_error)?;
            run_age(out, &g, m.as_ref(), &a, format)
        }
        Verb::Classify {
            graph,
            multiplicity,
            level,
            annotations,
        } => {
            let (g, m) = load_instance(&graph, multiplicity.as_deref(), level)?;
            let m = require_multiplicity(m)?;
            let annotations = match annotations {
                Some(path) => {
                    CurveAnnotations::from_json_str(&read_file(&path)?).map_err(validation)?
                }
                None => CurveAnnotations::default(),
            };
            run_classify(out, &g, &m, &annotations, budget, format)
        }
        Verb::HuntJunior {
            graph,
            multiplicity,
            level,
            max_edges,
            max_vertices,
        } => match graph {
            Some(graph) => {
                let (g, m) = load_instance(&graph, multiplicity.as_deref(), level)?;
                let m = require_multiplicity(m)?;
                run_hunt_single(out, &g, &m, budget, format)
            }
            None => {
                let level = level.ok_or_else(|| {
                    CliError::Validation(
                        "sweep mode needs --level (or pass --graph for one instance)".to_string(),
                    )
                })?;
                run_hunt_sweep(out, level, max_edges, max_vertices, budget, format)
            }
        },
        Verb::Witness { level } => run_witness(out, level, format),
        Verb::Fiber { graph, level } => {
            let (g, _) = load_instance(&graph, None, None)?;
            run_fiber(out, &g, level, format)
        }
        Verb::Degrees {
            genus,
            level,
            index,
        } => run_degrees(out, genus, level, index, format),
        Verb::Verify { suite } => run_verify(out, &suite, budget),
    }
}

fn run_analyze(
    out: &mut String,
    graph: &DualGraph,
    multiplicity: Option<&MultiplicityCochain>,
    format: Format,
    emit_dot: Option<&Path>,
) -> Result<(), CliError> {
    let dot = multiplicity
        .map(|m| render_dot(graph, m))
        .unwrap_or_else(|| render_dot_plain(graph));
    if let Some(path) = emit_dot {
        std::fs::write(path, &dot)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    match format {
        Format::Dot => {
            out.push_str(&dot);
            return Ok(());
        }
        Format::Json => {
            let mut report = serde_json::json!({
                "graph": graph.to_json(),
                "vertices": graph.vertex_count(),
                "edges": graph.edge_count(),
                "betti1": graph.betti1(),
                "vertex_genus_sum": graph.vertex_genus_sum(),
                "total_genus": graph.total_genus(),
            });
            if let Some(m) = multiplicity {
                report["multiplicity"] = m.to_json(graph);
                report["valuation"] = m.valuation().to_json(graph);
                report["towers"] = towers_json(graph, m);
            }
            emit(out, report);
        }
        Format::Text => {
            outln!(
                out,
                "graph: {} vertices, {} edges, b1 = {}, vertex genus sum = {}, total genus = {}",
                graph.vertex_count(),
                graph.edge_count(),
                graph.betti1(),
                graph.vertex_genus_sum(),
                graph.total_genus(),
            );
            if let Some(m) = multiplicity {
                outln!(out, "level: {}", m.level());
                for prime in &m.valuation().primes {
                    let tower = m
                        .contraction_tower(graph, prime.p)
                        .expect("prime divides level");
                    let counts = tower.vertex_counts();
                    outln!(
                        out,
                        "p = {}: stage vertex counts (k = {}..1) = {:?}, sigma_V = {}",
                        prime.p,
                        prime.exponent,
                        counts,
                        tower.sigma_v(),
                    );
                }
            }
        }
    }
    Ok(())
}

fn towers_json(graph: &DualGraph, m: &MultiplicityCochain) -> serde_json::Value {
    let towers: Vec<serde_json::Value> = m
        .valuation()
        .primes
        .iter()
        .map(|prime| {
            let tower = m
                .contraction_tower(graph, prime.p)
                .expect("prime divides level");
            serde_json::json!({
                "p": prime.p,
                "exponent": prime.exponent,
                "vertex_counts": tower.vertex_counts(),
                "sigma_v": tower.sigma_v(),
            })
        })
        .collect();
    serde_json::Value::Array(towers)
}

fn run_ghosts(
    out: &mut String,
    graph: &DualGraph,
    m: &MultiplicityCochain,
    format: Format,
) -> Result<(), CliError> {
    let group = ghosts::ghost_group(graph, m);
    match format {
        Format::Json => {
            let mut value = group.to_json(graph);
            value["generator_ages"] = serde_json::Value::Array(
                group
                    .generators()
                    .iter()
                    .map(|g| serde_json::Value::String(age::rational_str(&age::age_of(&g.element))))
                    .collect(),
            );
            emit(out, value);
        }
        _ => {
            outln!(out, "order {}", group.order());
            outln!(out, "structure {}", group.structure());
            outln!(out, "divisors {:?}", group.divisors());
            for gen in group.generators() {
                outln!(
                    out,
                    "generator of order {}: age {}, values {:?}",
                    gen.declared_order,
                    age::rational_str(&age::age_of(&gen.element)),
                    gen.element.values(),
                );
            }
        }
    }
    Ok(())
}

fn run_age(
    out: &mut String,
    graph: &DualGraph,
    multiplicity: Option<&MultiplicityCochain>,
    a: &SymmetricFunction,
    format: Format,
) -> Result<(), CliError> {
    let mut is_ghost = None;
    if let Some(m) = multiplicity {
        let verdict = ghosts::is_ghost(graph, a, m).map_err(ghost_error)?;
        if !verdict {
            return Err(CliError::Validation(
                "element lies in S_nu but is not a ghost of this multiplicity".to_string(),
            ));
        }
        is_ghost = Some(true);
    }
    let report = age::classify(a);
    match format {
        Format::Json => {
            let mut value = report.to_json(graph);
            if let Some(flag) = is_ghost {
                value["is_ghost"] = serde_json::Value::Bool(flag);
            }
            emit(out, value);
        }
        _ => outln!(out, "{} {}", age::rational_str(&report.age), report.verdict),
    }
    Ok(())
}

fn run_classify(
    out: &mut String,
    graph: &DualGraph,
    m: &MultiplicityCochain,
    annotations: &CurveAnnotations,
    budget: u64,
    format: Format,
) -> Result<(), CliError> {
    let report = singularity::classify_point(graph, m, annotations, budget).map_err(validation)?;
    match format {
        Format::Json => emit(out, report.to_json(graph)),
        _ => {
            outln!(out, "verdict: {}", report.verdict);
            for reason in &report.reasons {
                outln!(out, "reason: {}", reason_line(reason));
            }
            if !report.junior_scan_complete {
                outln!(out, "caveat: junior scan incomplete (budget exceeded)");
            }
        }
    }
    Ok(())
}

fn reason_line(reason: &singularity::VerdictReason) -> String {
    use singularity::VerdictReason::*;
    match reason {
        HasNontrivialGhosts => "has nontrivial ghosts".to_string(),
        NonEtiCoarseAut => {
            "coarse automorphisms not spanned by elliptic-tail involutions".to_string()
        }
        JCurve(report) => format!(
            "junior ghost of age {} with values {:?}",
            age::rational_str(&report.age),
            report.element.values(),
        ),
        TCurve(vertex) => {
            format!("order-3 elliptic tail with trivial level structure at `{vertex}`")
        }
    }
}

fn run_hunt_single(
    out: &mut String,
    graph: &DualGraph,
    m: &MultiplicityCochain,
    budget: u64,
    format: Format,
) -> Result<(), CliError> {
    match age::find_junior_ghost(graph, m, budget).map_err(age_error)? {
        Some(report) => match format {
            Format::Json => emit(out, report.to_json(graph)),
            _ => outln!(
                out,
                "junior ghost found: age {}, values {:?}",
                age::rational_str(&report.age),
                report.element.values(),
            ),
        },
        None => match format {
            Format::Json => emit(out, serde_json::json!({ "witness": null })),
            _ => outln!(out, "no junior ghosts (complete scan)"),
        },
    }
    Ok(())
}

fn run_hunt_sweep(
    out: &mut String,
    level: u64,
    max_edges: usize,
    max_vertices: usize,
    budget: u64,
    format: Format,
) -> Result<(), CliError> {
    if level == 0 {
        return Err(CliError::Validation(
            "the level must be positive".to_string(),
        ));
    }
    let report = age::junior_sweep(level, max_edges, max_vertices, budget);
    match format {
        Format::Json => emit(out, report.to_json()),
        _ => {
            outln!(
                out,
                "level {}: {} graphs, {} instances, {} junior witnesses, {} skipped",
                report.level,
                report.graphs,
                report.instances,
                report.witnesses.len(),
                report.skipped.len(),
            );
            match &report.max_junior_age {
                Some(age) => outln!(out, "max junior age {}", age::rational_str(age)),
                None if report.skipped.is_empty() => {
                    outln!(
                        out,
                        "no junior ghosts at level {} within these bounds",
                        report.level
                    )
                }
                None => outln!(
                    out,
                    "no junior ghosts found, but some instances were skipped"
                ),
            }
        }
    }
    Ok(())
}

fn run_witness(out: &mut String, level: u64, format: Format) -> Result<(), CliError> {
    if level == 0 {
        return Err(CliError::Validation(
            "the level must be positive".to_string(),
        ));
    }
    match age::junior_witness(level) {
        None => match format {
            Format::Json => emit(out, serde_json::json!({ "level": level, "witness": null })),
            _ => outln!(out, "none exists"),
        },
        Some(w) => match format {
            Format::Json => emit(
                out,
                serde_json::json!({ "level": level, "witness": w.to_json() }),
            ),
            _ => outln!(
                out,
                "junior witness at level {level}: age {}, element values {:?} on a graph with \
                 {} vertices and {} edges",
                age::rational_str(&w.age),
                w.element.values(),
                w.graph.vertex_count(),
                w.graph.edge_count(),
            ),
        },
    }
    Ok(())
}

fn run_fiber(
    out: &mut String,
    graph: &DualGraph,
    level: u64,
    format: Format,
) -> Result<(), CliError> {
    if level == 0 {
        return Err(CliError::Validation(
            "the level must be positive".to_string(),
        ));
    }
    let audit = counting::fiber_audit(graph, level).map_err(validation)?;
    match format {
        Format::Json => emit(out, audit.to_json(graph)),
        _ => {
            outln!(
                out,
                "fiber audit: level {}, genus {}, {} rows, total {} (= {}^{})",
                audit.level,
                audit.genus,
                audit.rows.len(),
                audit.total,
                audit.level,
                2 * audit.genus,
            );
        }
    }
    Ok(())
}

fn run_degrees(
    out: &mut String,
    genus: u32,
    level: u64,
    index: Option<u32>,
    format: Format,
) -> Result<(), CliError> {
    let indices: Vec<u32> = match index {
        Some(i) => vec![i],
        None => (1..=genus / 2).collect(),
    };
    let mut tables = Vec::new();
    for i in indices {
        tables.push(counting::boundary_degrees_prime(genus, level, i).map_err(validation)?);
    }
    match format {
        Format::Json => emit(
            out,
            serde_json::Value::Array(tables.iter().map(|t| t.to_json()).collect()),
        ),
        _ => {
            outln!(
                out,
                "forgetful degree (genus {genus}, level {level}): {}",
                age::rational_str(&counting::forgetful_degree(genus, level)),
            );
            let rat = age::rational_str;
            for t in &tables {
                outln!(
                    out,
                    "delta_{}: degrees {}, {}, {} (sum {})",
                    t.index,
                    rat(&t.reducible[0]),
                    rat(&t.reducible[1]),
                    rat(&t.reducible[2]),
                    rat(&t.reducible_sum),
                );
            }
            // The irreducible table depends only on genus and level.
            if let Some(irr) = tables.iter().find_map(|t| t.irreducible.as_ref()) {
                outln!(
                    out,
                    "delta_0: degrees {}, {}, {} (ramified component index {}, weight {}; \
                     weighted sum {})",
                    rat(&irr.degrees[0]),
                    rat(&irr.degrees[1]),
                    rat(&irr.degrees[2]),
                    irr.ramified_index,
                    irr.ramification_order,
                    rat(&irr.weighted_sum),
                );
            }
        }
    }
    Ok(())
}

/// DOT rendering without multiplicity data: the bare graph.
fn render_dot_plain(graph: &DualGraph) -> String {
    let mut out = String::from("digraph level_curve {\n");
    out.push_str("  rankdir=LR;\n");
    for i in 0..graph.vertex_count() {
        let v = graph.vertex(ghostlab::VertexIdx(i));
        out.push_str(&format!(
            "  \"{}\" [label=\"{} (g={})\"];\n",
            v.id, v.id, v.genus
        ));
    }
    for i in 0..graph.edge_count() {
        let e = graph.edge(EdgeIdx(i));
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            graph.vertex(e.tail).id,
            graph.vertex(e.head).id,
            e.id,
        ));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering with multiplicity data: the full graph with
/// `(M(e), ν_p(e))` edge labels, plus one cluster subgraph per contraction
/// tower stage.
fn render_dot(graph: &DualGraph, m: &MultiplicityCochain) -> String {
    let profile = m.valuation();
    let mut out = String::from("digraph level_curve {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  subgraph cluster_full {\n");
    out.push_str(&format!("    label=\"level {}\";\n", m.level()));
    for i in 0..graph.vertex_count() {
        let v = graph.vertex(ghostlab::VertexIdx(i));
        out.push_str(&format!(
            "    \"full_{}\" [label=\"{} (g={})\"];\n",
            v.id, v.id, v.genus
        ));
    }
    for i in 0..graph.edge_count() {
        let e = graph.edge(EdgeIdx(i));
        let valuations: Vec<String> = profile
            .primes
            .iter()
            .map(|prime| format!("nu{}={}", prime.p, prime.values[i]))
            .collect();
        out.push_str(&format!(
            "    \"full_{}\" -> \"full_{}\" [label=\"{}: M={} {}\"];\n",
            graph.vertex(e.tail).id,
            graph.vertex(e.head).id,
            e.id,
            m.values()[i],
            valuations.join(" "),
        ));
    }
    out.push_str("  }\n");
    for prime in &profile.primes {
        let tower = m
            .contraction_tower(graph, prime.p)
            .expect("prime divides level");
        for stage in tower.stages.iter().filter(|s| s.k > 0) {
            let quotient = stage.contraction.quotient();
            let tag = format!("p{}_k{}", prime.p, stage.k);
            out.push_str(&format!("  subgraph cluster_{tag} {{\n"));
            out.push_str(&format!(
                "    label=\"p = {}, k = {} ({} vertices)\";\n",
                prime.p,
                stage.k,
                quotient.vertex_count(),
            ));
            for i in 0..quotient.vertex_count() {
                let v = quotient.vertex(ghostlab::VertexIdx(i));
                out.push_str(&format!("    \"{tag}_{}\" [label=\"{}\"];\n", v.id, v.id));
            }
            for i in 0..quotient.edge_count() {
                let e = quotient.edge(EdgeIdx(i));
                let source = stage.contraction.source_edge(EdgeIdx(i));
                out.push_str(&format!(
                    "    \"{tag}_{}\" -> \"{tag}_{}\" [label=\"{}: M={}\"];\n",
                    quotient.vertex(e.tail).id,
                    quotient.vertex(e.head).id,
                    e.id,
                    m.values()[source.0],
                ));
            }
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}

/// One check of the verification suite.
struct Check {
    name: &'static str,
    run: Box<dyn Fn() -> Result<(), String>>,
}

fn check(name: &'static str, run: impl Fn() -> Result<(), String> + 'static) -> Check {
    Check {
        name,
        run: Box::new(run),
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(label: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got:?}, want {want:?}"))
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn run_verify(out: &mut String, suite: &str, budget: u64) -> Result<(), CliError> {
    if suite != "paper-examples" {
        return Err(CliError::Validation(format!(
            "unknown suite `{suite}` (available: paper-examples)"
        )));
    }
    let checks = paper_example_checks(budget);
    let mut failures = 0usize;
    for check in &checks {
        match (check.run)() {
            Ok(()) => outln!(out, "ok   {}", check.name),
            Err(msg) => {
                failures += 1;
                outln!(out, "FAIL {}: {msg}", check.name);
            }
        }
    }
    outln!(out, "{} checks, {} failures", checks.len(), failures);
    if failures > 0 {
        return Err(CliError::Mismatch(failures));
    }
    Ok(())
}

fn paper_example_checks(budget: u64) -> Vec<Check> {
    vec![
        check(
            "level-8 showcase ghost group is Z/2 + Z/4 + Z/8 of order 64",
            || {
                let (g, m) = ghostlab::gallery::tower_showcase();
                let group = ghosts::ghost_group(&g, &m);
                expect_eq("order", group.order().to_string(), "64".to_string())?;
                expect_eq("divisors", group.divisors(), vec![2, 4, 8])?;
                expect_eq(
                    "structure",
                    group.structure(),
                    "Z/2 \u{2295} Z/4 \u{2295} Z/8".to_string(),
                )
            },
        ),
        check(
            "level-8 showcase tower has vertex counts (4, 3, 2), sigma_V = 9",
            || {
                let (g, m) = ghostlab::gallery::tower_showcase();
                let tower = m.contraction_tower(&g, 2).map_err(|e| e.to_string())?;
                expect_eq("counts (k = 3, 2, 1)", tower.vertex_counts(), vec![4, 3, 2])?;
                expect_eq("sigma_V", tower.sigma_v(), 9)
            },
        ),
        check(
            "showcase generator ages are 3/2, 5/4, 1 at orders 2, 4, 8",
            || {
                let (g, m) = ghostlab::gallery::tower_showcase();
                let group = ghosts::ghost_group(&g, &m);
                let by_order: BTreeMap<u64, BigRational> = group
                    .generators()
                    .iter()
                    .map(|gen| (gen.declared_order, age::age_of(&gen.element)))
                    .collect();
                expect_eq(
                    "age of order-2 generator",
                    by_order[&2].clone(),
                    rational(3, 2),
                )?;
                expect_eq(
                    "age of order-4 generator",
                    by_order[&4].clone(),
                    rational(5, 4),
                )?;
                expect_eq(
                    "age of order-8 generator",
                    by_order[&8].clone(),
                    rational(1, 1),
                )
            },
        ),
        check(
            "junior witnesses at levels 5, 8, 12 are ghosts of ages 4/5, 3/4, 2/3",
            || {
                let cases = [
                    (ghostlab::gallery::junior5(), rational(4, 5)),
                    (ghostlab::gallery::junior8(), rational(3, 4)),
                    (ghostlab::gallery::junior12(), rational(2, 3)),
                ];
                for ((g, m, a), expected) in cases {
                    if !ghosts::is_ghost(&g, &a, &m).map_err(|e| e.to_string())? {
                        return Err(format!("level-{} witness is not a ghost", m.level()));
                    }
                    expect_eq("age", age::age_of(&a), expected)?;
                }
                Ok(())
            },
        ),
        check(
            "junior witness instances classify as noncanonical J-curves",
            move || {
                for (g, m, _) in [
                    ghostlab::gallery::junior5(),
                    ghostlab::gallery::junior8(),
                    ghostlab::gallery::junior12(),
                ] {
                    let report =
                        singularity::classify_point(&g, &m, &CurveAnnotations::default(), budget)
                            .map_err(|e| e.to_string())?;
                    expect_eq(
                        "verdict",
                        report.verdict,
                        ghostlab::SingularityVerdict::Noncanonical,
                    )?;
                    if !report
                        .reasons
                        .iter()
                        .any(|r| matches!(r, singularity::VerdictReason::JCurve(_)))
                    {
                        return Err("no J-curve reason attached".to_string());
                    }
                }
                Ok(())
            },
        ),
        check(
            "level-8 witness dictionary sends the element to the multiplicity diagram",
            || {
                let (g, m, a) = ghostlab::gallery::junior8();
                let b = ghosts::sym_to_cochain(&g, &a, &m).map_err(|e| e.to_string())?;
                expect_eq("b values", b.values().to_vec(), m.values().to_vec())
            },
        ),
        check(
            "level-3 circuit trio: (Z/3)^2 with min age 1, Z/3 with ages 1, trivial",
            move || {
                let (tg, tm) = ghostlab::gallery::triangle3();
                let triangle = ghosts::ghost_group(&tg, &tm);
                expect_eq(
                    "triangle order",
                    triangle.order().to_string(),
                    "9".to_string(),
                )?;
                expect_eq("triangle divisors", triangle.divisors(), vec![3, 3])?;
                let min_age = ghosts::enumerate_ghosts(&tg, &tm, budget)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .filter(|a| !a.is_zero())
                    .map(|a| age::age_of(&a))
                    .min()
                    .ok_or("triangle group is unexpectedly trivial")?;
                expect_eq("triangle min nontrivial age", min_age, rational(1, 1))?;
                let (bg, bm) = ghostlab::gallery::banana3();
                let banana = ghosts::ghost_group(&bg, &bm);
                expect_eq("banana order", banana.order().to_string(), "3".to_string())?;
                for a in ghosts::enumerate_ghosts(&bg, &bm, budget)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .filter(|a| !a.is_zero())
                {
                    expect_eq("banana ghost age", age::age_of(a), rational(1, 1))?;
                }
                let (lg, lm) = ghostlab::gallery::loop3();
                expect_eq(
                    "loop group trivial",
                    ghosts::ghost_group(&lg, &lm).is_trivial(),
                    true,
                )
            },
        ),
        check(
            "junior witnesses exist exactly outside levels {1, 2, 3, 4, 6}",
            || {
                for level in 1..=24u64 {
                    let expected_none = matches!(level, 1 | 2 | 3 | 4 | 6);
                    let witness = age::junior_witness(level);
                    if witness.is_none() != expected_none {
                        return Err(format!("level {level}: witness presence wrong"));
                    }
                }
                Ok(())
            },
        ),
        check(
            "tail stabilizers: exactly the four classified cases up to l = 12",
            || {
                let mut found = Vec::new();
                for l in 1..=12u64 {
                    for r in (1..=l).filter(|r| l % r == 0) {
                        for k1 in 0..l {
                            for k2 in 0..r {
                                let b = tails::TailLineBundle::new(l, r, k1 as i64, k2 as i64)
                                    .map_err(|e| e.to_string())?;
                                if !b.is_faithful() || b.order() != l {
                                    continue;
                                }
                                let stab = tails::tail_stabilizer(&b).map_err(|e| e.to_string())?;
                                if !stab.is_empty() {
                                    found.push((
                                        l,
                                        r,
                                        b.k1,
                                        b.k2,
                                        stab.iter().map(|g| (g.a1, g.a2)).collect::<Vec<_>>(),
                                    ));
                                }
                            }
                        }
                    }
                }
                let expected = vec![
                    (1, 1, 0, 0, vec![(1, 0)]),
                    (2, 1, 1, 0, vec![(1, 0)]),
                    (2, 2, 0, 1, vec![(1, 0)]),
                    (2, 2, 1, 1, vec![(1, 0)]),
                    (4, 2, 1, 1, vec![(1, 1)]),
                    (4, 2, 3, 1, vec![(1, 1)]),
                ];
                expect_eq("classification", found, expected)
            },
        ),
        check(
            "forgetful degree matches the prime closed form for g = 2..6",
            || {
                for genus in 2..=6u32 {
                    for level in [2u64, 3, 5, 7] {
                        let got = counting::forgetful_degree(genus, level);
                        let want = BigRational::new(
                            num::pow(num::BigInt::from(level), 2 * genus as usize)
                                - num::BigInt::from(1),
                            num::BigInt::from(level),
                        );
                        expect_eq("degree", got, want)?;
                    }
                }
                Ok(())
            },
        ),
        check("boundary degree tables sum to the forgetful degree", || {
            for genus in 4..=8u32 {
                for level in [2u64, 3, 5, 7] {
                    for index in 1..=genus / 2 {
                        let table = counting::boundary_degrees_prime(genus, level, index)
                            .map_err(|e| e.to_string())?;
                        expect_eq(
                            "reducible sum",
                            table.reducible_sum,
                            table.forgetful.clone(),
                        )?;
                        if let Some(irr) = table.irreducible {
                            expect_eq("weighted sum", irr.weighted_sum, table.forgetful)?;
                        }
                    }
                }
            }
            Ok(())
        }),
        check(
            "banana fiber at level 2: rows 32 x 1 and 16 x 2, total 64",
            || {
                let g = DualGraph::new(
                    [("v1".to_string(), 1), ("v2".to_string(), 1)],
                    [
                        ("e1".to_string(), "v1".to_string(), "v2".to_string()),
                        ("e2".to_string(), "v1".to_string(), "v2".to_string()),
                    ],
                )
                .map_err(|e| e.to_string())?;
                let audit = counting::fiber_audit(&g, 2).map_err(|e| e.to_string())?;
                expect_eq("rows", audit.rows.len(), 2)?;
                expect_eq(
                    "components of M = 0",
                    audit.rows[0].components.to_string(),
                    "32".to_string(),
                )?;
                expect_eq(
                    "length of M = 0",
                    audit.rows[0].length.to_string(),
                    "1".to_string(),
                )?;
                expect_eq(
                    "components of circuit M",
                    audit.rows[1].components.to_string(),
                    "16".to_string(),
                )?;
                expect_eq(
                    "length of circuit M",
                    audit.rows[1].length.to_string(),
                    "2".to_string(),
                )?;
                expect_eq("total", audit.total.to_string(), "64".to_string())
            },
        ),
        check("showcase fiber total is 8^8", || {
            let (g, _) = ghostlab::gallery::tower_showcase();
            let total = counting::fiber_total(&g, 8).map_err(|e| e.to_string())?;
            expect_eq("total", total.to_string(), 8u128.pow(8).to_string())
        }),
        check("JSON round-trips: graph, multiplicity, element", || {
            let (g, m) = ghostlab::gallery::tower_showcase();
            let g2 =
                DualGraph::from_json_str(&g.to_json().to_string()).map_err(|e| e.to_string())?;
            expect_eq("graph round-trip", g2 == g, true)?;
            let m2 = MultiplicityCochain::from_json_str(&g, &m.to_json(&g).to_string())
                .map_err(|e| e.to_string())?;
            expect_eq(
                "multiplicity round-trip",
                m2.values().to_vec(),
                m.values().to_vec(),
            )?;
            let (jg, _, ja) = ghostlab::gallery::junior5();
            let a2 = SymmetricFunction::from_json_str(&jg, &ja.to_json(&jg).to_string())
                .map_err(|e| e.to_string())?;
            expect_eq(
                "element round-trip",
                a2.values().to_vec(),
                ja.values().to_vec(),
            )
        }),
    ]
}
