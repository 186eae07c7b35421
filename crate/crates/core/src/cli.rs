//! The `privcap` command line. Every command prints one JSON report on
//! stdout; timing and the worker count live under `"timing"` so that
//! reports from different machines can be diffed byte-for-byte.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dimacs;
use crate::error::{Error, Result};
use crate::graph::{self, Graph, SizeCap};
use crate::independence::{self, Budget, DEFAULT_NODE_BUDGET};
use crate::math::PrimeList;
use crate::privileged::{self, mask_from_ids, PrimeSource, PrivilegedSystem, SubsetFamily};
use crate::ramsey::{self, EdgeColoring, FallbackRule, RainbowMode};

pub const REPORT_FORMAT_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "PRIVCAP_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "privcap", version, about = "Privileged-subset channel graphs and capacity certificates")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Worker threads (0 = all cores). Never changes the report contents.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget of the exact independence solver.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Largest adjacency matrix, in bits, any command may allocate.
    #[arg(long, global = true, default_value_t = SizeCap::DEFAULT_BITS, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Default output directory (else $PRIVCAP_OUT_DIR).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a multi-sender system.
    #[command(subcommand)]
    Construct(Construct),
    /// Certified capacity bracket for a coalition of a built system.
    Bound(BoundArgs),
    /// Independence number of a DIMACS graph.
    Alpha(AlphaArgs),
    /// Capacity bracket of a DIMACS graph from its first strong powers.
    Bracket(BracketArgs),
    /// Graph file operations.
    #[command(subcommand)]
    Graph(GraphOp),
    /// Explicit edge colourings of complete graphs.
    #[command(subcommand)]
    Ramsey(RamseyOp),
}

#[derive(Subcommand, Debug)]
enum Construct {
    Privileged(PrivilegedArgs),
}

#[derive(Args, Debug)]
struct PrivilegedArgs {
    #[arg(long)]
    t: u32,
    /// Inline JSON such as [[1,2],[2,3]], or a file holding it.
    #[arg(long, required_unless_present = "threshold", conflicts_with = "threshold")]
    family: Option<String>,
    /// Use all k-subsets of the senders as the family.
    #[arg(long)]
    threshold: Option<u32>,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    #[arg(long, value_delimiter = ',', required_unless_present = "base_prime", conflicts_with = "base_prime")]
    primes: Vec<u64>,
    /// Use the primes following this one.
    #[arg(long)]
    base_prime: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write only the manifest; graphs are rebuilt from it on load.
    #[arg(long)]
    skip_graph_files: bool,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    system: PathBuf,
    /// Sender ids, as [1,2] or 1,2.
    #[arg(long)]
    coalition: String,
}

#[derive(Args, Debug)]
struct AlphaArgs {
    file: PathBuf,
    /// Exit with status 1 if the budget runs out.
    #[arg(long)]
    require_exact: bool,
}

#[derive(Args, Debug)]
struct BracketArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 2)]
    k_max: u32,
}

#[derive(Subcommand, Debug)]
enum GraphOp {
    /// Strong product A ⊠ B.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-th strong power.
    Power {
        file: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disjoint union, in argument order.
    Union {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Complement {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum RamseyOp {
    Build {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
        mode: ModeArg,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

/// Runs the command line in `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let started = Instant::now();
    let workers = cli.global.workers;
    let out_dir = cli.global.out_dir.clone().or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    let ctx =
        Ctx { seed: cli.global.seed, budget: Budget::nodes(cli.global.budget), cap: SizeCap(cli.global.cap), out_dir };
    let outcome = if workers == 0 {
        execute(&ctx, cli.command)
    } else {
        crate::with_workers(workers, || execute(&ctx, cli.command))
    };
    match outcome {
        Ok(Outcome::Graph(g)) => match dimacs::write_dimacs(&g, &mut *out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_RUNTIME
            }
        },
        Ok(Outcome::Report { result, failure }) => {
            let report = json!({
                "format_version": REPORT_FORMAT_VERSION,
                "tool": { "name": "privcap", "version": env!("CARGO_PKG_VERSION") },
                "command": canonical_command(&argv),
                "config": {
                    "seed": ctx.seed,
                    "budget": ctx.budget.nodes,
                    "cap": ctx.cap.0,
                    "out_dir": ctx.out_dir,
                },
                "result": result,
                "timing": {
                    "elapsed_ms": started.elapsed().as_millis() as u64,
                    "workers": workers,
                },
            });
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Err(e) = writeln!(out, "{text}") {
                let _ = writeln!(err, "error: {e}");
                return EXIT_RUNTIME;
            }
            match failure {
                Some(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_RUNTIME
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::IndexOutOfRange { .. }
        | Error::SizeCapExceeded { .. }
        | Error::Validation(_)
        | Error::Parse(_)
        | Error::Json(_) => EXIT_USAGE,
        Error::Io(io) if io.kind() == io::ErrorKind::NotFound => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// The argument vector without the worker count, which never affects results.
fn canonical_command(argv: &[String]) -> Vec<String> {
    let mut kept = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--workers" {
            skip = true;
        } else if !a.starts_with("--workers=") {
            kept.push(a.clone());
        }
    }
    kept
}

struct Ctx {
    seed: u64,
    budget: Budget,
    cap: SizeCap,
    out_dir: Option<PathBuf>,
}

impl Ctx {
    fn output(&self, given: Option<PathBuf>, default_name: &str) -> Result<PathBuf> {
        given
            .or_else(|| self.out_dir.as_ref().map(|d| d.join(default_name)))
            .ok_or_else(|| Error::invalid(format!("no --out given and neither --out-dir nor {OUT_DIR_ENV} is set")))
    }
}

enum Outcome {
    Report {
        result: Value,
        failure: Option<String>,
    },
    /// A graph to print on stdout instead of a report.
    Graph(Graph),
}

fn ok(result: Value) -> Result<Outcome> {
    Ok(Outcome::Report { result, failure: None })
}

fn execute(ctx: &Ctx, command: Command) -> Result<Outcome> {
    match command {
        Command::Construct(Construct::Privileged(a)) => construct_privileged(ctx, a),
        Command::Bound(a) => bound(ctx, a),
        Command::Alpha(a) => alpha(ctx, a),
        Command::Bracket(a) => bracket(ctx, a),
        Command::Graph(op) => graph_op(ctx, op),
        Command::Ramsey(op) => ramsey_op(ctx, op),
    }
}

fn parse_family(t: u32, spec: &str) -> Result<SubsetFamily> {
    let text = if spec.trim_start().starts_with('[') { spec.to_string() } else { fs::read_to_string(spec)? };
    let lists: Vec<Vec<u32>> =
        serde_json::from_str(&text).map_err(|e| Error::parse(format!("family must be a JSON list of lists: {e}")))?;
    if lists.iter().any(Vec::is_empty) {
        return Err(Error::invalid("family contains the empty set"));
    }
    SubsetFamily::from_lists(t, &lists)
}

fn parse_ids(spec: &str) -> Result<Vec<u32>> {
    let spec = spec.trim();
    if spec.starts_with('[') {
        return serde_json::from_str(spec).map_err(|e| Error::parse(format!("coalition: {e}")));
    }
    spec.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse().map_err(|_| Error::parse(format!("coalition: bad sender id {p:?}"))))
        .collect()
}

fn construct_privileged(ctx: &Ctx, a: PrivilegedArgs) -> Result<Outcome> {
    let family = match (&a.family, a.threshold) {
        (Some(spec), _) => parse_family(a.t, spec)?,
        (None, Some(k)) => SubsetFamily::threshold(a.t, k)?,
        (None, None) => return Err(Error::invalid("give --family or --threshold")),
    };
    if a.s > a.r {
        return Err(Error::Validation(format!("s = {} exceeds r = {}", a.s, a.r)));
    }
    let source = match a.base_prime {
        Some(p) => PrimeSource::After(p),
        None => PrimeSource::Pool(PrimeList::new(a.primes.clone())?),
    };
    let dir = ctx.output(a.out, "system")?;
    let system = PrivilegedSystem::build(family, a.r, a.s, source, ctx.cap)?;
    let manifest = system.save(&dir, !a.skip_graph_files)?;
    let edges: Vec<usize> = system.graphs.iter().map(Graph::edge_count).collect();
    ok(json!({
        "system_dir": dir,
        "manifest": manifest,
        "maximal_free_sets": system.assignment.maximal_free_sets().iter().map(|&y| privileged::ids_from_mask(y)).collect::<Vec<_>>(),
        "union_size": system.assignment.union_size(),
        "param_warnings": system.params.warnings,
        "edge_counts": edges,
    }))
}

fn bound(ctx: &Ctx, a: BoundArgs) -> Result<Outcome> {
    let ids = parse_ids(&a.coalition)?;
    if ids.is_empty() {
        return Err(Error::invalid("coalition is empty"));
    }
    let system = PrivilegedSystem::load(&a.system, ctx.cap)?;
    let x = mask_from_ids(system.t(), &ids)?;
    let report = privileged::bound_report(&system, x, ctx.cap)?;
    ok(json!({ "system_dir": a.system, "bound": report }))
}

fn alpha_json(res: &independence::AlphaResult) -> Value {
    json!({
        "size": res.size,
        "exact": res.exact,
        "nodes": res.nodes,
        "witness": res.witness.iter().map(|v| v + 1).collect::<Vec<_>>(),
    })
}

fn alpha(ctx: &Ctx, a: AlphaArgs) -> Result<Outcome> {
    let g = dimacs::load_graph(&a.file, ctx.cap)?;
    let res = independence::max_independent_set(&g, ctx.budget);
    let failure = (a.require_exact && !res.exact)
        .then(|| format!("node budget of {} exhausted before α was proven", ctx.budget.nodes));
    Ok(Outcome::Report {
        result: json!({ "graph": a.file, "vertices": g.n(), "edges": g.edge_count(), "alpha": alpha_json(&res) }),
        failure,
    })
}

fn bracket(ctx: &Ctx, a: BracketArgs) -> Result<Outcome> {
    let g = dimacs::load_graph(&a.file, ctx.cap)?;
    let upper = independence::clique_cover_upper(&g);
    let b = independence::capacity_bracket(&g, a.k_max, Some(upper), ctx.budget, ctx.cap)?;
    ok(json!({ "graph": a.file, "vertices": g.n(), "bracket": b }))
}

fn emit_graph(g: Graph, out_path: Option<PathBuf>, op: &str) -> Result<Outcome> {
    match out_path {
        Some(path) => {
            dimacs::save_graph(&path, &g)?;
            ok(json!({
                "operation": op,
                "out": path,
                "vertices": g.n(),
                "edges": g.edge_count(),
                "labeled": g.labels().is_some(),
            }))
        }
        None => Ok(Outcome::Graph(g)),
    }
}

fn load(path: &Path, cap: SizeCap) -> Result<Graph> {
    dimacs::load_graph(path, cap)
}

fn graph_op(ctx: &Ctx, op: GraphOp) -> Result<Outcome> {
    match op {
        GraphOp::Product { a, b, out: path } => {
            let g = graph::strong_product(&load(&a, ctx.cap)?, &load(&b, ctx.cap)?, ctx.cap)?;
            emit_graph(g, path, "product")
        }
        GraphOp::Power { file, k, out: path } => {
            let g = graph::power(&load(&file, ctx.cap)?, k, ctx.cap)?;
            emit_graph(g, path, "power")
        }
        GraphOp::Union { files, out: path } => {
            let parts = files.iter().map(|f| load(f, ctx.cap)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Graph> = parts.iter().collect();
            let g = graph::disjoint_union(&refs, ctx.cap)?;
            emit_graph(g, path, "union")
        }
        GraphOp::Complement { file, out: path } => {
            let g = graph::complement(&load(&file, ctx.cap)?);
            emit_graph(g, path, "complement")
        }
    }
}

fn ramsey_op(ctx: &Ctx, op: RamseyOp) -> Result<Outcome> {
    match op {
        RamseyOp::Build { r, s, primes, out: path } => {
            let primes = PrimeList::new(primes)?;
            let path = ctx.output(path, "coloring.bin")?;
            let coloring = ramsey::build_coloring(r, s, &primes, FallbackRule::RankSumModT, ctx.cap)?;
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            coloring.save(&path)?;
            ok(json!({
                "out": path,
                "header": coloring.header(),
                "param_warnings": coloring.params().warnings,
                "well_defined": ramsey::check_well_defined(&coloring),
            }))
        }
        RamseyOp::Verify { coloring: path, mode, size, trials } => {
            let coloring = EdgeColoring::load(&path)?;
            let mode = match mode {
                ModeArg::Exact => RainbowMode::Exact,
                ModeArg::Sampled => RainbowMode::Sampled {
                    size: size.ok_or_else(|| Error::invalid("sampled mode needs --size"))?,
                    trials,
                    seed: ctx.seed,
                },
            };
            let well_defined = ramsey::check_well_defined(&coloring);
            let audit = ramsey::audit_rules(&coloring);
            let rainbow = ramsey::verify_rainbow(&coloring, mode, ctx.budget, ctx.cap)?;
            let mut problems = Vec::new();
            if !well_defined.well_defined {
                problems.push("overlap rules conflict");
            }
            if audit.mismatch_count > 0 {
                problems.push("stored colours disagree with the overlap rules");
            }
            if !rainbow.passed {
                problems.push("rainbow verification failed");
            }
            let passed = problems.is_empty();
            Ok(Outcome::Report {
                result: json!({
                    "coloring": path,
                    "passed": passed,
                    "well_defined": well_defined,
                    "audit": audit,
                    "rainbow": rainbow,
                }),
                failure: (!passed).then(|| problems.join("; ")),
            })
        }
    }
}
