//! Command-line front end: JSON in, JSON out.
//!
//! Exit codes: 0 success, 2 a verification found a counterexample,
//! 3 a combinatorial budget was refused, 64 usage or schema error.

mod search;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use segre_lab::constructions::{
    gen_example_k2, gen_example_k3, gen_example_k4, gen_example_z1,
};
use segre_lab::dependence::{analyze, AnalysisReport};
use segre_lab::error::Error;
use segre_lab::io::PointSetDoc;
use segre_lab::linalg::FieldSpec;
use segre_lab::theorems::{Mode, StatementId, VerificationJob, DEFAULT_BUDGET};

const EXIT_OK: u8 = 0;
const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "segre-lab",
    version,
    about = "Exact analysis of finite point configurations on Segre varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a point set: defect, width, concision, dependency class,
    /// family match and subset profile.
    Analyze(AnalyzeArgs),
    /// Generate one of the example families as point-set JSON.
    Gen(GenArgs),
    /// Run a verification job for one of the named statements.
    Verify(VerifyArgs),
    /// Enumerate or sample a domain and emit every set matching the
    /// requested invariants, one JSON document per line.
    Search(search::SearchArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input file (point-set JSON); stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Family name: k2, k3, k4 or z1.
    family: String,
    /// Number of factors.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// First special factor dimension (k2).
    #[arg(long, default_value_t = 1)]
    n1: usize,
    /// Second special factor dimension (k2).
    #[arg(long, default_value_t = 1)]
    n2: usize,
    /// Special factor dimension (k3, k4).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Total number of points (k4).
    #[arg(long, default_value_t = 6)]
    s: usize,
    /// Coefficient field: gf<p> or q.
    #[arg(long, default_value = "gf3")]
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Statement id: a1, a2, x1, x1.1, o4.1, z3, f1, f2, cp1, is1, o8.
    statement: String,
    #[arg(long, default_value = "gf3")]
    field: String,
    /// Space shape as comma-separated factor dimensions, repeatable;
    /// the statement's default domain when omitted.
    #[arg(long = "space")]
    spaces: Vec<String>,
    /// Set size, repeatable; the statement's default when omitted.
    #[arg(long = "size")]
    sizes: Vec<usize>,
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Sample count for sampled mode.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Instance budget; exhaustive domains larger than this are refused.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Prune subsets that are not canonical under factor permutations.
    #[arg(long)]
    reduce_symmetry: bool,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct AnalyzeOutput {
    tool_version: &'static str,
    command_line: String,
    input: PointSetDoc,
    report: AnalysisReport,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SEGRE_LAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => search::cmd_search(args),
    }
}

pub(crate) fn parse_field(s: &str) -> Result<FieldSpec, Error> {
    let lower = s.to_ascii_lowercase();
    if lower == "q" || lower == "rationals" {
        return Ok(FieldSpec::Q);
    }
    if let Some(p) = lower.strip_prefix("gf") {
        let p: u64 = p
            .trim_start_matches('(')
            .trim_end_matches(')')
            .parse()
            .map_err(|_| Error::Schema(format!("bad field spec `{s}`")))?;
        return FieldSpec::prime(p);
    }
    Err(Error::Schema(format!(
        "bad field spec `{s}` (expected gf<p> or q)"
    )))
}

pub(crate) fn parse_shape(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Schema(format!("bad space shape `{s}`")))
        })
        .collect()
}

fn write_out(out: &Option<PathBuf>, contents: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, Error> {
    let raw = match &args.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Schema(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    // Accept either a bare point-set document or a previous analyze output
    // (its canonical point set sits under "input").
    let doc = match PointSetDoc::from_json(&raw) {
        Ok(doc) => doc,
        Err(first_err) => {
            let value: serde_json::Value =
                serde_json::from_str(&raw).map_err(|_| first_err.clone())?;
            match value.get("input") {
                Some(inner) => serde_json::from_value::<PointSetDoc>(inner.clone())
                    .map_err(|e| Error::Schema(e.to_string()))?,
                None => return Err(first_err),
            }
        }
    };
    let set = doc.into_set()?;
    let report = analyze(&set)?;
    let output = AnalyzeOutput {
        tool_version: env!("CARGO_PKG_VERSION"),
        command_line: command_line(),
        input: PointSetDoc::from_set(&set),
        report,
    };
    write_out(
        &args.out,
        &serde_json::to_string_pretty(&output).expect("report serializes"),
    )?;
    Ok(EXIT_OK)
}

fn cmd_gen(args: GenArgs) -> Result<u8, Error> {
    let field = parse_field(&args.field)?;
    let (_, set) = match args.family.to_ascii_lowercase().as_str() {
        "k2" => gen_example_k2(args.k, args.n1, args.n2, field, args.seed)?,
        "k3" => gen_example_k3(args.k, args.n, field, args.seed)?,
        "k4" => gen_example_k4(args.k, args.n, args.s, field, args.seed)?,
        "z1" => gen_example_z1(field, args.seed)?,
        other => {
            return Err(Error::Schema(format!(
                "unknown family `{other}` (expected k2, k3, k4 or z1)"
            )))
        }
    };
    write_out(&args.out, &PointSetDoc::from_set(&set).to_json_pretty())?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    let statement = StatementId::parse(&args.statement)?;
    let field = parse_field(&args.field)?;
    let mode = match args.mode.to_ascii_lowercase().as_str() {
        "exhaustive" => Mode::Exhaustive,
        "sampled" => Mode::Sampled {
            count: args.samples,
        },
        other => {
            return Err(Error::Schema(format!(
                "unknown mode `{other}` (expected exhaustive or sampled)"
            )))
        }
    };
    let spaces = args
        .spaces
        .iter()
        .map(|s| parse_shape(s))
        .collect::<Result<Vec<_>, _>>()?;
    let job = VerificationJob {
        statement,
        field,
        spaces,
        sizes: args.sizes.clone(),
        mode,
        seed: args.seed,
        budget: args.budget,
        reduce_symmetry: args.reduce_symmetry,
    };
    let started = std::time::Instant::now();
    let mut report = segre_lab::theorems::run(&job)?;
    report.command_line = Some(command_line());
    // Timing goes to stderr so the report stays byte-reproducible.
    eprintln!(
        "verify {}: {} instances in {:.2?}",
        report.statement,
        report.instances_checked,
        started.elapsed()
    );
    let code = report.exit_code() as u8;
    write_out(&args.out, &report.to_json_pretty())?;
    Ok(code)
}
