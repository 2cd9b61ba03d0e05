//! Batch front door: parse inputs, run one operation, emit a versioned JSON
//! report on stdout. Artifacts go to files when an output path is given,
//! otherwise they are embedded in the report.
//!
//! Exit codes: 0 success, 1 verification failed, 2 input/parse error,
//! 3 oracle cap exceeded, 4 internal assertion failure.

use clap::{Parser, Subcommand, ValueEnum};
use mixedfree::clique::clique_number_capped;
use mixedfree::coloring::chromatic_exact_capped;
use mixedfree::compress::{compress, degeneracy_coloring, CompressionKind};
use mixedfree::engine::{color_bounded, EngineOpts};
use mixedfree::error::Error;
use mixedfree::format::{
    caps_from_env, parse_coloring, parse_graph, parse_sequence, witness_from_json,
    witness_to_json, write_coloring, write_graph, write_sequence, Caps,
};
use mixedfree::gen::{generate, GenSpec};
use mixedfree::graph::is_proper;
use mixedfree::matrix::{
    find_minor_capped, min_almost_mixed_free_capped, CornerGrid, Division, MinorKind,
};
use mixedfree::recurrence::RecurrenceTable;
use mixedfree::twinwidth::{d_from_twinwidth, twinwidth_exact_capped, width_of_sequence};
use mixedfree::OrderedGraph;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

const DEFAULT_SEED: u64 = 0x6d69786564;

#[derive(Parser)]
#[command(name = "mixedfree", version, about = "Coloring graphs with almost-mixed-free ordered adjacency matrices")]
struct Cli {
    /// Seed for randomized inputs (generators, bench workloads).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Upper bound on internal worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mixed,
    Almost,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompArg {
    H,
    V,
    M,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Grid,
    DisjointCliques,
    Cograph,
    BoundedTww,
    ErdosRenyi,
}

#[derive(Subcommand)]
enum Cmd {
    /// Color a graph under the almost-mixed-freeness promise at level d.
    Color {
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        /// Override the clique-defect parameter (default: omega / 8).
        #[arg(long)]
        k: Option<usize>,
        /// Write the recursion trace as JSON to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Brute-force search for a d-almost-mixed minor first (capped).
        #[arg(long)]
        verify_promise: bool,
        /// Greedily merge compatible color classes after the run.
        #[arg(long)]
        squash: bool,
        /// Coloring file destination.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a coloring, a minor witness, or a contraction sequence.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Exact twin-width with a witnessing contraction sequence.
    Tww {
        graph: PathBuf,
        #[arg(long)]
        seq_out: Option<PathBuf>,
    },
    /// Search for (almost-)mixed minors, or the minimal freeness level.
    Minor {
        graph: PathBuf,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value = "almost")]
        kind: KindArg,
        /// Report the least d such that the matrix is d-almost-mixed-free.
        #[arg(long)]
        min: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compression of a symmetric division along the given cuts.
    Compress {
        graph: PathBuf,
        /// Interior cut positions, comma-separated (e.g. 2,5 for blocks
        /// 1..2, 3..5, 6..n in 1-based vertex terms).
        #[arg(long)]
        cuts: String,
        #[arg(long, value_enum)]
        kind: CompArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Tabulate the color-count recurrence and emit CSV rows d,n,log2_f,beta.
    Recurrence {
        #[arg(long, default_value_t = 5)]
        d_max: usize,
        #[arg(long, default_value_t = 4096)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        alpha: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Generate a graph from a seeded family.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Destination for the attached contraction sequence, when one exists.
        #[arg(long)]
        seq_out: Option<PathBuf>,
    },
    /// Corner-scan and minor-search throughput on seeded random graphs.
    Bench {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        reps: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Coloring file against a graph: proper and complete.
    Coloring { graph: PathBuf, coloring: PathBuf },
    /// Minor witness JSON against a graph.
    Witness { graph: PathBuf, witness: PathBuf },
    /// Contraction sequence against a graph; optionally enforce a width cap.
    Sequence {
        graph: PathBuf,
        sequence: PathBuf,
        #[arg(long)]
        max_width: Option<usize>,
    },
}

#[derive(Serialize)]
struct RunReport {
    schema: u32,
    command: String,
    input_digest: Option<String>,
    parameters: BTreeMap<String, serde_json::Value>,
    outputs: BTreeMap<String, serde_json::Value>,
    invariant_checks: BTreeMap<String, bool>,
    timing_ms: u128,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            schema: 1,
            command: command.into(),
            input_digest: None,
            parameters: BTreeMap::new(),
            outputs: BTreeMap::new(),
            invariant_checks: BTreeMap::new(),
            timing_ms: 0,
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.into(), serde_json::to_value(value).unwrap());
    }

    fn output(&mut self, key: &str, value: impl Serialize) {
        self.outputs
            .insert(key.into(), serde_json::to_value(value).unwrap());
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.invariant_checks.insert(key.into(), ok);
    }

    fn all_checks_pass(&self) -> bool {
        self.invariant_checks.values().all(|&v| v)
    }
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok(mut report) => {
            report.timing_ms = start.elapsed().as_millis();
            let ok = report.all_checks_pass();
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            std::process::exit(if ok { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Input(_) => 2,
                Error::OracleCap { .. } => 3,
                Error::PromiseViolated(_) | Error::EngineBug(_) => 4,
            };
            std::process::exit(code);
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Error> {
    std::fs::write(path, content)
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn digest(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

fn load_graph(path: &Path, report: &mut RunReport) -> Result<OrderedGraph, Error> {
    let text = read_to_string(path)?;
    report.input_digest = Some(digest(&text));
    parse_graph(&text)
}

/// Write `content` to `dest` when given, else embed it in the report.
fn emit(
    report: &mut RunReport,
    key: &str,
    content: &str,
    dest: &Option<PathBuf>,
) -> Result<(), Error> {
    match dest {
        Some(path) => {
            write_file(path, content)?;
            report.output(key, path.display().to_string());
        }
        None => report.output(key, content),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<RunReport, Error> {
    let caps = caps_from_env()?;
    match cli.cmd {
        Cmd::Color {
            graph,
            d,
            k,
            trace,
            verify_promise,
            squash,
            output,
        } => cmd_color(&graph, d, k, trace, verify_promise, squash, output, &caps),
        Cmd::Verify { what } => cmd_verify(what, &caps),
        Cmd::Tww { graph, seq_out } => cmd_tww(&graph, seq_out, &caps),
        Cmd::Minor {
            graph,
            d,
            kind,
            min,
            output,
        } => cmd_minor(&graph, d, kind, min, output, &caps),
        Cmd::Compress {
            graph,
            cuts,
            kind,
            output,
        } => cmd_compress(&graph, &cuts, kind, output),
        Cmd::Recurrence {
            d_max,
            n_max,
            alpha,
            output,
        } => cmd_recurrence(d_max, n_max, alpha, output),
        Cmd::Gen {
            family,
            n,
            rows,
            cols,
            count,
            size,
            t,
            p,
            output,
            seq_out,
        } => cmd_gen(family, n, rows, cols, count, size, t, p, cli.seed, output, seq_out),
        Cmd::Bench { n, reps } => cmd_bench(n, reps, cli.seed, &caps),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_color(
    graph: &Path,
    d: usize,
    k: Option<usize>,
    trace: Option<PathBuf>,
    verify_promise: bool,
    squash: bool,
    output: Option<PathBuf>,
    caps: &Caps,
) -> Result<RunReport, Error> {
    let mut report = RunReport::new("color");
    let g = load_graph(graph, &mut report)?;
    report.param("d", d);
    report.param("k", k);
    report.param("squash", squash);
    report.param("caps", format!("{caps:?}"));
    if verify_promise {
        let found = find_minor_capped(
            &g,
            d,
            None,
            MinorKind::AlmostMixed,
            caps.minor_n,
            caps.minor_d,
            caps.minor_blocks,
        )?;
        report.output("promise_minor_found", found.is_some());
        if let Some(w) = &found {
            report.output("promise_minor_witness", witness_to_json(w));
        }
    }
    let opts = EngineOpts {
        k_override: k,
        chromatic_cap: caps.chromatic,
        squash,
        ..Default::default()
    };
    let run = color_bounded(&g, d, &opts)?;
    let num = run.coloring.flattened().num_colors();
    report.output("n", g.n());
    report.output("num_colors", num);
    report.output("omega", run.trace.omega);
    report.output("promise_violated", run.promise_violated);
    match chromatic_exact_capped(&g, caps.chromatic) {
        Ok((chi, _)) => report.output("chi_exact", chi),
        Err(Error::OracleCap { .. }) => {}
        Err(e) => return Err(e),
    }
    report.check("proper", is_proper(&g, &run.coloring)?);
    emit(&mut report, "coloring", &write_coloring(&g, &run.coloring), &output)?;
    if let Some(path) = trace {
        write_file(&path, &serde_json::to_string_pretty(&run.trace).unwrap())?;
        report.output("trace", path.display().to_string());
    }
    Ok(report)
}

fn cmd_verify(what: VerifyCmd, caps: &Caps) -> Result<RunReport, Error> {
    match what {
        VerifyCmd::Coloring { graph, coloring } => {
            let mut report = RunReport::new("verify-coloring");
            let g = load_graph(&graph, &mut report)?;
            let c = parse_coloring(&read_to_string(&coloring)?, g.n())?;
            report.output("num_colors", c.flattened().num_colors());
            report.check("proper", is_proper(&g, &c)?);
            Ok(report)
        }
        VerifyCmd::Witness { graph, witness } => {
            let mut report = RunReport::new("verify-witness");
            let g = load_graph(&graph, &mut report)?;
            let w = witness_from_json(&read_to_string(&witness)?)?;
            report.output("d", w.d);
            report.check("witness_valid", w.verify(&g).is_ok());
            Ok(report)
        }
        VerifyCmd::Sequence {
            graph,
            sequence,
            max_width,
        } => {
            let _ = caps;
            let mut report = RunReport::new("verify-sequence");
            let g = load_graph(&graph, &mut report)?;
            let seq = parse_sequence(&read_to_string(&sequence)?)?;
            let w = width_of_sequence(&g, &seq)?;
            report.output("width", w);
            if let Some(cap) = max_width {
                report.param("max_width", cap);
                report.check("width_within_bound", w <= cap);
            }
            Ok(report)
        }
    }
}

fn cmd_tww(graph: &Path, seq_out: Option<PathBuf>, caps: &Caps) -> Result<RunReport, Error> {
    let mut report = RunReport::new("tww");
    let g = load_graph(graph, &mut report)?;
    let (t, seq) = twinwidth_exact_capped(&g, caps.tww)?;
    report.output("twinwidth", t);
    report.output("d_guarantee", d_from_twinwidth(t));
    report.check("witness_replays", width_of_sequence(&g, &seq)? == t);
    emit(&mut report, "sequence", &write_sequence(&seq), &seq_out)?;
    Ok(report)
}

fn cmd_minor(
    graph: &Path,
    d: Option<usize>,
    kind: KindArg,
    min: bool,
    output: Option<PathBuf>,
    caps: &Caps,
) -> Result<RunReport, Error> {
    let mut report = RunReport::new("minor");
    let g = load_graph(graph, &mut report)?;
    if min {
        let least = min_almost_mixed_free_capped(&g, caps.minor_n)?;
        report.output("min_almost_mixed_free", least);
        return Ok(report);
    }
    let d = d.ok_or_else(|| Error::input("--d is required unless --min is given"))?;
    let kind = match kind {
        KindArg::Mixed => MinorKind::Mixed,
        KindArg::Almost => MinorKind::AlmostMixed,
    };
    report.param("d", d);
    let found = find_minor_capped(&g, d, None, kind, caps.minor_n, caps.minor_d, caps.minor_blocks)?;
    report.output("found", found.is_some());
    if let Some(w) = &found {
        report.check("witness_valid", w.verify(&g).is_ok());
        emit(&mut report, "witness", &witness_to_json(w), &output)?;
    }
    Ok(report)
}

fn cmd_compress(
    graph: &Path,
    cuts: &str,
    kind: CompArg,
    output: Option<PathBuf>,
) -> Result<RunReport, Error> {
    let mut report = RunReport::new("compress");
    let g = load_graph(graph, &mut report)?;
    let mut bounds: Vec<usize> = Vec::new();
    for item in cuts.split(',').filter(|s| !s.trim().is_empty()) {
        let cut: usize = item
            .trim()
            .parse()
            .map_err(|e| Error::input(format!("cut `{item}`: {e}")))?;
        bounds.push(cut);
    }
    bounds.push(g.n());
    bounds.dedup();
    let div = Division::symmetric(g.n(), bounds)?;
    let kind = match kind {
        CompArg::H => CompressionKind::H,
        CompArg::V => CompressionKind::V,
        CompArg::M => CompressionKind::M,
    };
    report.param("cuts", cuts);
    let comp = compress(&g, &div, kind)?;
    report.output("blocks", comp.graph.n());
    report.output("edges", comp.graph.edge_count());
    if kind == CompressionKind::M {
        let (_, deg) = degeneracy_coloring(&comp.graph);
        report.output("degeneracy", deg);
    }
    emit(&mut report, "compression", &write_graph(&comp.graph), &output)?;
    Ok(report)
}

fn cmd_recurrence(
    d_max: usize,
    n_max: u64,
    alpha: u64,
    output: Option<PathBuf>,
) -> Result<RunReport, Error> {
    let mut report = RunReport::new("recurrence");
    report.param("d_max", d_max);
    report.param("n_max", n_max);
    report.param("alpha", alpha);
    let table = RecurrenceTable::build(d_max, n_max, RecurrenceTable::uniform_alphas(d_max, alpha))?;
    let mut csv = String::from("d,n,log2_f,beta\n");
    let mut betas = BTreeMap::new();
    for d in 2..=d_max {
        let beta = table.fit_beta(d);
        betas.insert(d.to_string(), beta);
        let mut n = 1u64;
        while n <= n_max {
            csv.push_str(&format!(
                "{d},{n},{:.6},{beta}\n",
                table.get(d, n).log2_upper()
            ));
            n = n.saturating_mul(2);
        }
    }
    report.output("betas", betas);
    emit(&mut report, "csv", &csv, &output)?;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Family,
    n: Option<usize>,
    rows: Option<usize>,
    cols: Option<usize>,
    count: Option<usize>,
    size: Option<usize>,
    t: Option<usize>,
    p: Option<f64>,
    seed: u64,
    output: Option<PathBuf>,
    seq_out: Option<PathBuf>,
) -> Result<RunReport, Error> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::input(format!("--{name} is required for this family")))
    };
    let spec = match family {
        Family::Path => GenSpec::Path { n: need(n, "n")? },
        Family::Cycle => GenSpec::Cycle { n: need(n, "n")? },
        Family::Grid => GenSpec::Grid {
            rows: need(rows, "rows")?,
            cols: need(cols, "cols")?,
        },
        Family::DisjointCliques => GenSpec::DisjointCliques {
            count: need(count, "count")?,
            size: need(size, "size")?,
        },
        Family::Cograph => GenSpec::Cograph { n: need(n, "n")?, seed },
        Family::BoundedTww => GenSpec::BoundedTww {
            n: need(n, "n")?,
            t: need(t, "t")?,
            seed,
        },
        Family::ErdosRenyi => GenSpec::ErdosRenyi {
            n: need(n, "n")?,
            p: p.ok_or_else(|| Error::input("--p is required for erdos-renyi"))?,
            seed,
        },
    };
    let mut report = RunReport::new("gen");
    report.param("spec", serde_json::to_value(&spec).unwrap());
    let generated = generate(&spec)?;
    report.output("n", generated.graph.n());
    report.output("edges", generated.graph.edge_count());
    emit(&mut report, "graph", &write_graph(&generated.graph), &output)?;
    if let Some(seq) = &generated.sequence {
        report.check(
            "sequence_replays",
            width_of_sequence(&generated.graph, seq).is_ok(),
        );
        emit(&mut report, "sequence", &write_sequence(seq), &seq_out)?;
    }
    Ok(report)
}

fn cmd_bench(n: usize, reps: usize, seed: u64, caps: &Caps) -> Result<RunReport, Error> {
    let mut report = RunReport::new("bench");
    report.param("n", n);
    report.param("reps", reps);
    report.param("seed", seed);
    let graphs: Vec<OrderedGraph> = (0..reps)
        .map(|i| {
            generate(&GenSpec::ErdosRenyi {
                n,
                p: 0.5,
                seed: seed.wrapping_add(i as u64),
            })
            .map(|g| g.graph)
        })
        .collect::<Result<_, _>>()?;
    let start = Instant::now();
    let mut zone_checks = 0u64;
    for g in &graphs {
        let grid = CornerGrid::new(g);
        for i in 0..g.n() {
            for j in 0..g.n() {
                if grid.zone_mixed(i, i + 1, j, j + 1) {
                    zone_checks += 1;
                }
            }
        }
        zone_checks += (g.n() * g.n()) as u64;
    }
    let scan_secs = start.elapsed().as_secs_f64();
    report.output("corner_scan_zone_checks", zone_checks);
    report.output(
        "corner_scan_per_sec",
        (zone_checks as f64 / scan_secs.max(1e-9)) as u64,
    );
    let start = Instant::now();
    let mut searches = 0u64;
    for g in &graphs {
        let _ = find_minor_capped(
            g,
            3,
            None,
            MinorKind::AlmostMixed,
            caps.minor_n,
            caps.minor_d,
            caps.minor_blocks,
        )?;
        searches += 1;
    }
    let search_secs = start.elapsed().as_secs_f64();
    report.output("minor_searches", searches);
    report.output(
        "minor_searches_per_sec",
        searches as f64 / search_secs.max(1e-9),
    );
    // ensure the clique oracle is exercised too
    for g in &graphs {
        let _ = clique_number_capped(g, caps.clique)?;
    }
    Ok(report)
}
