//! The `bgpmatch` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::assembly::SolutionSet;
use crate::bundled::LUBM_QUERIES;
use crate::engine::{EngineError, PreparedQuery, Store};
use crate::query::QueryError;
use crate::rdf::RdfError;
use crate::results::{self, Format};
use crate::stats::millis;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bgpmatch", version, about = "Answer SPARQL basic graph pattern queries over N-Triples data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one query and print its solutions.
    Query {
        data: PathBuf,
        query: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        /// Print run statistics as JSON on stderr.
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Time a set of queries (the bundled LUBM queries by default).
    Bench {
        data: PathBuf,
        /// Directory of *.rq files to run instead of the bundled queries.
        #[arg(long)]
        queries: Option<PathBuf>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        repetitions: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the matcher against the reference evaluator.
    OracleCheck {
        data: PathBuf,
        query: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Worker threads for supersteps. Falls back to BGP_THREADS.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Bind or rebind a prefix, e.g. `--prefix ub=http://example.org/#`.
    #[arg(long = "prefix", value_name = "NAME=IRI", value_parser = parse_prefix)]
    prefixes: Vec<(String, String)>,
}

fn parse_prefix(s: &str) -> Result<(String, String), String> {
    let (name, iri) = s.split_once('=').ok_or("expected NAME=IRI")?;
    let iri = iri.strip_prefix('<').and_then(|i| i.strip_suffix('>')).unwrap_or(iri);
    Ok((name.trim_end_matches(':').to_owned(), iri.to_owned()))
}

/// A failure with its exit code and message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn parse(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, message: message.into() }
    }
}

fn load(path: &Path) -> Result<Store, Failure> {
    Store::load(path).map_err(|e| match e {
        RdfError::Parse(p) => Failure::parse(format!("{}:{}: {}", path.display(), p.line, p.reason)),
        other => Failure::usage(format!("{}: {other}", path.display())),
    })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn prepare(store: &Store, name: &str, text: &str, prefixes: &BTreeMap<String, String>) -> Result<PreparedQuery, Failure> {
    store.prepare_with_prefixes(text, prefixes).map_err(|e| match &e {
        QueryError::Syntax { at, message } => Failure::parse(format!("{name}:{at}: {message}")),
        QueryError::UndeclaredPrefix { at, prefix } => Failure::parse(format!("{name}:{at}: undeclared prefix '{prefix}:'")),
        _ => Failure::parse(format!("{name}: {e}")),
    })
}

fn thread_count(flag: Option<u32>, env: Option<String>) -> Result<Option<usize>, Failure> {
    if let Some(n) = flag {
        return Ok(Some(n as usize));
    }
    match env {
        None => Ok(None),
        Some(s) if s.trim().is_empty() => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::usage(format!("BGP_THREADS must be a positive integer, got '{s}'"))),
        },
    }
}

fn run_on(store: &Store, prepared: &PreparedQuery, threads: Option<usize>) -> Result<crate::engine::Execution, Failure> {
    store.execute_with_threads(prepared, threads).map_err(|e: EngineError| Failure::usage(e.to_string()))
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::usage(format!("write failed: {e}"))
}

/// Runs the matcher and the reference evaluator (through `evaluate`, so
/// tests can substitute a broken engine) and prints any disagreement.
/// Returns whether both agree.
pub fn oracle_check(
    store: &Store,
    prepared: &PreparedQuery,
    evaluate: impl Fn(&Store, &PreparedQuery) -> SolutionSet,
    out: &mut impl Write,
) -> std::io::Result<bool> {
    let engine = evaluate(store, prepared);
    let oracle = store.oracle(&prepared.query);
    let (only_engine, only_oracle) = engine.difference(&oracle);
    if only_engine.is_empty() && only_oracle.is_empty() {
        writeln!(out, "ok: {} solutions", engine.len())?;
        return Ok(true);
    }
    writeln!(out, "MISMATCH: engine {} solutions, oracle {}", engine.len(), oracle.len())?;
    for (tag, rows) in [("engine only", only_engine), ("oracle only", only_oracle)] {
        for row in rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{tag}\t{}", cells.join("\t"))?;
        }
    }
    Ok(false)
}

fn bench_queries(dir: Option<&Path>) -> Result<Vec<(String, String)>, Failure> {
    let Some(dir) = dir else {
        return Ok(LUBM_QUERIES.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect());
    };
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "rq"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::usage(format!("{}: no .rq files", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            Ok((name, read_text(p)?))
        })
        .collect()
}

fn dispatch(cli: Cli, env_threads: Option<String>, out: &mut impl Write, err: &mut impl Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Query { data, query, format, stats, common } => {
            let threads = thread_count(common.threads, env_threads)?;
            let prefixes = common.prefixes.into_iter().collect();
            let started = Instant::now();
            let text = read_text(&query)?;
            let store = load(&data)?;
            let load_ms = millis(started.elapsed());
            let prepared = prepare(&store, &query.display().to_string(), &text, &prefixes)?;
            let mut exec = run_on(&store, &prepared, threads)?;
            results::write(out, &exec.solutions, format).map_err(io_failure)?;
            if stats {
                exec.stats.parse_ms += load_ms;
                writeln!(err, "{}", exec.stats.to_json()).map_err(io_failure)?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { data, queries, repetitions, common } => {
            let threads = thread_count(common.threads, env_threads)?;
            let prefixes = common.prefixes.into_iter().collect();
            let store = load(&data)?;
            for (name, text) in bench_queries(queries.as_deref())? {
                let mut times = Vec::with_capacity(repetitions as usize);
                let mut counts = Vec::with_capacity(repetitions as usize);
                for _ in 0..repetitions {
                    let start = Instant::now();
                    let prepared = prepare(&store, &name, &text, &prefixes)?;
                    let exec = run_on(&store, &prepared, threads)?;
                    times.push(millis(start.elapsed()));
                    counts.push(exec.solutions.len());
                }
                let mean = times.iter().sum::<f64>() / times.len() as f64;
                let min = times.iter().copied().fold(f64::INFINITY, f64::min);
                let max = times.iter().copied().fold(0.0, f64::max);
                let stable = counts.windows(2).all(|w| w[0] == w[1]);
                writeln!(
                    out,
                    "{name}\treps={repetitions}\tmean_ms={mean:.3}\tmin_ms={min:.3}\tmax_ms={max:.3}\tsolutions={}{}",
                    counts[0],
                    if stable { "" } else { "\tUNSTABLE" }
                )
                .map_err(io_failure)?;
            }
            Ok(EXIT_OK)
        }
        Command::OracleCheck { data, query, common } => {
            let threads = thread_count(common.threads, env_threads)?;
            let prefixes = common.prefixes.into_iter().collect();
            let text = read_text(&query)?;
            let store = load(&data)?;
            let prepared = prepare(&store, &query.display().to_string(), &text, &prefixes)?;
            let evaluate = |s: &Store, p: &PreparedQuery| {
                s.execute_with_threads(p, threads).map(|e| e.solutions).unwrap_or_else(|_| s.execute(p).solutions)
            };
            let agree = oracle_check(&store, &prepared, evaluate, out).map_err(io_failure)?;
            Ok(if agree { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}

/// Entry point with injectable arguments, environment and streams. Returns
/// the process exit code.
pub fn run<I, T>(args: I, env_threads: Option<String>, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match dispatch(cli, env_threads, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "bgpmatch: {}", f.message);
            f.code
        }
    }
}
