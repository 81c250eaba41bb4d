//! The `girthlab` command line. Reports go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{audit_graph, AuditOptions, AuditScope};
use crate::classify::{check_bounds, classify_with_profile, known_nonexistence, ClassifyError};
use crate::format::{parse_any, write_graph6, write_sparse6};
use crate::girth::{girth_profile, signature};
use crate::graph::{named_graph, Graph, NamedGraphId};
use crate::report::{per_vertex_csv, Entry, Exit, Report, SearchSection};
use crate::search::{
    confirm_config, generate, resume, Frontier, GirthMode, SearchConfig, SearchError, SearchStatus,
};

#[derive(Parser, Debug)]
#[command(
    name = "girthlab",
    version,
    about = "Girth cycles, regularity and exhaustive search for regular graphs"
)]
struct Cli {
    /// Add a Unix timestamp to the report.
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify graphs and evaluate the counting bounds.
    Analyze(AnalyzeArgs),
    /// Run the girth-5 counting audit.
    Audit(AuditArgs),
    /// Exhaustive generation of regular graphs with a girth constraint.
    Search(SearchArgs),
    /// Look up a parameter triple in the non-existence table.
    Oracle(OracleArgs),
    /// Convert between graph6 and sparse6.
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// File of graph6/sparse6 lines, `-` for stdin, or `named:<id>`.
    input: String,
    /// Emit a per-vertex CSV table instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// File of graph6/sparse6 lines, `-` for stdin, or `named:<id>`.
    input: String,
    /// `all` or `sample:<count>,<seed>`.
    #[arg(long, default_value = "all")]
    scope: String,
    /// Claimed λ; defaults to the measured value.
    #[arg(long)]
    lambda: Option<u64>,
    /// Threads for the per-pair audits.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GirthModeArg {
    Exactly,
    AtLeast,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Degree.
    #[arg(long)]
    k: usize,
    /// Girth.
    #[arg(long)]
    g: usize,
    /// Largest order to enumerate.
    #[arg(long = "max-n")]
    max_n: usize,
    /// Keep graphs whose vertices all lie on this many girth cycles.
    #[arg(long, conflicts_with = "epsilon2")]
    lambda: Option<u64>,
    /// Girth-5 non-existence run for this value of 2ε, so `λ = (k(k-1)² - 2ε)/2`.
    #[arg(long)]
    epsilon2: Option<u64>,
    /// Also prune branches where a vertex exceeds λ.
    #[arg(long, requires = "lambda")]
    prune: bool,
    #[arg(long = "girth-mode", value_enum, default_value = "at-least")]
    girth_mode: GirthModeArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Shuffles the work units; results do not depend on it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Depth at which the tree is cut into work units.
    #[arg(long = "split-depth", default_value_t = 4)]
    split_depth: usize,
    /// Suspend after this many expanded nodes.
    #[arg(long = "node-budget")]
    node_budget: Option<u64>,
    /// Where to write the frontier when suspended.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from a frontier file.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    g: u64,
    #[arg(long)]
    lambda: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Graph6,
    Sparse6,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// File of graph6/sparse6 lines, `-` for stdin, or `named:<id>`.
    input: String,
    /// Output encoding; by default each line switches encoding.
    #[arg(long)]
    to: Option<Target>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Exit::Input.code()
            } else {
                Exit::Ok.code()
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let ctx = Ctx {
        echo,
        timestamps: cli.timestamps,
    };
    let exit = match cli.command {
        Command::Analyze(a) => analyze(&ctx, a, out, err),
        Command::Audit(a) => audit(&ctx, a, out, err),
        Command::Search(a) => search(&ctx, a, out, err),
        Command::Oracle(a) => oracle(a, out, err),
        Command::Convert(a) => convert(a, out, err),
    };
    exit.code()
}

struct Ctx {
    echo: Vec<String>,
    timestamps: bool,
}

struct InputGraph {
    line: usize,
    graph: Graph,
}

/// Reads every graph of an input; the first bad line is an input error.
fn read_input(source: &str, err: &mut dyn Write) -> Result<Vec<InputGraph>, Exit> {
    if let Some(name) = source.strip_prefix("named:") {
        let g = name
            .parse::<NamedGraphId>()
            .and_then(named_graph)
            .map_err(|e| {
                let _ = writeln!(err, "{source}: error: {e}");
                Exit::Input
            })?;
        return Ok(vec![InputGraph { line: 0, graph: g }]);
    }
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(source)
    }
    .map_err(|e| {
        let _ = writeln!(err, "{source}: error: {e}");
        Exit::Input
    })?;
    let mut graphs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match parse_any(line) {
            Ok(graph) => graphs.push(InputGraph { line: i + 1, graph }),
            Err(e) => {
                let _ = writeln!(err, "{source}:{}: error: {e}", i + 1);
                return Err(Exit::Input);
            }
        }
    }
    Ok(graphs)
}

fn emit(report: &mut Report, exit: Exit, out: &mut dyn Write) -> Exit {
    report.summary.exit_code = exit.code();
    let _ = out.write_all(report.to_json().as_bytes());
    exit
}

fn analyze(ctx: &Ctx, a: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let graphs = match read_input(&a.input, err) {
        Ok(g) => g,
        Err(e) => return e,
    };
    let mut report = Report::new(ctx.echo.clone(), ctx.timestamps);
    let mut exit = Exit::Ok;
    let mut csv_rows = Vec::new();
    for (idx, ig) in graphs.iter().enumerate() {
        let g = &ig.graph;
        let mut entry = Entry::new(ig.line, write_graph6(g));
        report.summary.graphs += 1;
        let where_ = |e: &dyn std::fmt::Display| format!("{}:{}: {e}", a.input, ig.line);
        let profile = if g.is_connected() {
            girth_profile(g).map_err(ClassifyError::from)
        } else {
            Err(ClassifyError::Disconnected)
        };
        let classified = profile.and_then(|p| {
            if let Err(msg) = p.check_handshakes(g) {
                let _ = writeln!(err, "{}", where_(&format!("internal: {msg}")));
                exit = exit.max(Exit::Internal);
            }
            classify_with_profile(g, &p).map(|r| (r, p))
        });
        match classified {
            Ok((r, p)) => {
                let checks = check_bounds(g, &r);
                let failures = checks.iter().filter(|c| !c.holds).count();
                if failures > 0 {
                    let _ = writeln!(err, "{}", where_(&"internal: counting bound violated"));
                    report.summary.bound_failures += failures;
                    exit = exit.max(Exit::Internal);
                }
                report.summary.vgr += r.is_vgr as usize;
                if a.csv {
                    let sigs = (0..g.n())
                        .map(|v| {
                            signature(g, v, &p)
                                .map(|s| s.to_string())
                                .unwrap_or_default()
                        })
                        .collect();
                    csv_rows.push((idx, entry.graph6.clone(), p.per_vertex.clone(), sigs));
                }
                entry.classification = Some(r);
                entry.bound_checks = Some(checks);
            }
            Err(e @ ClassifyError::ExcludedParameters { .. }) => {
                let _ = writeln!(err, "{}", where_(&format!("internal: {e}")));
                entry.error = Some(e.to_string());
                report.summary.errors += 1;
                exit = exit.max(Exit::Internal);
            }
            Err(e) => {
                entry.error = Some(e.to_string());
                report.summary.errors += 1;
            }
        }
        report.entries.push(entry);
    }
    if a.csv {
        let _ = out.write_all(quote_signatures(&per_vertex_csv(&csv_rows)).as_bytes());
        return exit;
    }
    emit(&mut report, exit, out)
}

/// Signatures contain commas; wrap them in quotes.
fn quote_signatures(csv: &str) -> String {
    csv.lines()
        .map(|l| match l.find('(') {
            Some(i) => format!("{}\"{}\"\n", &l[..i], &l[i..]),
            None => format!("{l}\n"),
        })
        .collect()
}

fn parse_scope(s: &str) -> Option<AuditScope> {
    if s == "all" {
        return Some(AuditScope::AllPairs);
    }
    let (count, seed) = s.strip_prefix("sample:")?.split_once(',')?;
    Some(AuditScope::SampledPairs {
        count: count.trim().parse().ok()?,
        seed: seed.trim().parse().ok()?,
    })
}

fn audit(ctx: &Ctx, a: AuditArgs, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let Some(scope) = parse_scope(&a.scope) else {
        let _ = writeln!(
            err,
            "error: --scope must be `all` or `sample:<count>,<seed>`"
        );
        return Exit::Input;
    };
    if a.workers == 0 {
        let _ = writeln!(err, "error: --workers must be at least 1");
        return Exit::Input;
    }
    let graphs = match read_input(&a.input, err) {
        Ok(g) => g,
        Err(e) => return e,
    };
    let opts = AuditOptions {
        scope,
        lambda: a.lambda,
        workers: a.workers,
    };
    let mut report = Report::new(ctx.echo.clone(), ctx.timestamps);
    let mut exit = Exit::Ok;
    for ig in &graphs {
        let mut entry = Entry::new(ig.line, write_graph6(&ig.graph));
        report.summary.graphs += 1;
        match audit_graph(&ig.graph, &opts) {
            Ok(r) => {
                report.summary.audited += 1;
                report.summary.identity_failures += r.summary.identity_failures;
                if !r.summary.all_pass {
                    exit = exit.max(Exit::Finding);
                }
                entry.audit = Some(r);
            }
            Err(e) => {
                let _ = writeln!(err, "{}:{}: ineligible: {e}", a.input, ig.line);
                report.summary.errors += 1;
                entry.error = Some(e.to_string());
            }
        }
        report.entries.push(entry);
    }
    emit(&mut report, exit, out)
}

fn search_exit(e: &SearchError) -> Exit {
    match e {
        SearchError::Internal(_) => Exit::Internal,
        _ => Exit::Input,
    }
}

fn search(ctx: &Ctx, a: SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let mut two_epsilon = None;
    let mut c = if let Some(e2) = a.epsilon2 {
        if a.g != 5 {
            let _ = writeln!(err, "error: --epsilon2 applies to girth 5 only");
            return Exit::Input;
        }
        match confirm_config(a.k, e2, a.max_n) {
            Ok((c, _)) => {
                two_epsilon = Some(e2);
                c
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return Exit::Input;
            }
        }
    } else {
        let mut c = SearchConfig::new(a.k, a.g, a.max_n);
        c.girth_mode = match a.girth_mode {
            GirthModeArg::Exactly => GirthMode::Exactly,
            GirthModeArg::AtLeast => GirthMode::AtLeast,
        };
        c.lambda_filter = a.lambda;
        c.lambda_pruning = a.prune;
        c
    };
    c.workers = a.workers;
    c.seed = a.seed;
    c.split_depth = a.split_depth;
    c.node_budget = a.node_budget;

    let result = match &a.resume {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| SearchError::Checkpoint(format!("{}: {e}", path.display())))
            .and_then(|t| Frontier::parse(&t))
            .and_then(|f| resume(&c, &f, &mut |_| {})),
        None => generate(&c, &mut |_| {}),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return search_exit(&e);
        }
    };

    let mut report = Report::new(ctx.echo.clone(), ctx.timestamps);
    let mut exit = Exit::Ok;
    let mut checkpoint = None;
    if outcome.status == SearchStatus::Suspended {
        exit = Exit::Suspended;
        if let (Some(path), Some(f)) = (&a.checkpoint, &outcome.frontier) {
            if let Err(e) = fs::write(path, f.to_text()) {
                let _ = writeln!(err, "error: writing {}: {e}", path.display());
                return Exit::Input;
            }
            checkpoint = Some(path.display().to_string());
        } else {
            let _ = writeln!(
                err,
                "warning: search suspended without --checkpoint; frontier discarded"
            );
        }
    }
    for g6 in &outcome.hits {
        let mut entry = Entry::new(0, g6.clone());
        report.summary.graphs += 1;
        match crate::format::parse_graph6(g6)
            .map_err(|e| e.to_string())
            .and_then(|g| crate::classify::classify(&g).map_err(|e| e.to_string()))
        {
            Ok(r) => {
                report.summary.vgr += r.is_vgr as usize;
                entry.classification = Some(r);
            }
            Err(e) => entry.error = Some(e),
        }
        report.entries.push(entry);
    }
    let contradictions = two_epsilon.map(|_| outcome.hits.clone());
    if contradictions.as_ref().is_some_and(|c| !c.is_empty()) {
        let _ = writeln!(
            err,
            "THEOREM CONTRADICTION: {} vgr hit(s) in the excluded range",
            outcome.hits.len()
        );
        exit = exit.max(Exit::Finding);
    }
    report.search = Some(SearchSection {
        outcome,
        two_epsilon,
        contradictions,
        checkpoint,
    });
    emit(&mut report, exit, out)
}

fn oracle(a: OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    match known_nonexistence(a.k, a.g, a.lambda) {
        Ok(v) => {
            let _ = writeln!(out, "{v}");
            Exit::Ok
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Exit::Input
        }
    }
}

fn convert(a: ConvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    if let Some(name) = a.input.strip_prefix("named:") {
        let g = match name.parse::<NamedGraphId>().and_then(named_graph) {
            Ok(g) => g,
            Err(e) => {
                let _ = writeln!(err, "{}: error: {e}", a.input);
                return Exit::Input;
            }
        };
        let text = match a.to {
            Some(Target::Sparse6) => write_sparse6(&g),
            _ => write_graph6(&g),
        };
        let _ = writeln!(out, "{text}");
        return Exit::Ok;
    }
    let text = if a.input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(&a.input)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{}: error: {e}", a.input);
            return Exit::Input;
        }
    };
    let mut lines = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let g = match parse_any(line) {
            Ok(g) => g,
            Err(e) => {
                let _ = writeln!(err, "{}:{}: error: {e}", a.input, i + 1);
                return Exit::Input;
            }
        };
        let sparse = match a.to {
            Some(Target::Graph6) => false,
            Some(Target::Sparse6) => true,
            None => !line.starts_with(':') && !line.starts_with(">>sparse6<<"),
        };
        lines.push_str(&if sparse {
            write_sparse6(&g)
        } else {
            write_graph6(&g)
        });
        lines.push('\n');
    }
    let _ = out.write_all(lines.as_bytes());
    Exit::Ok
}
