//! `ramcycles`: JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 malformed input or usage, 2 domain error,
//! 3 resource limit.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use ramcycles::cycle::{build_cycle_lattice, local_context, CycleLattice};
use ramcycles::global::{global_report, GlobalInput};
use ramcycles::json::{self as rjson, RationalString};
use ramcycles::lattice::HermGram;
use ramcycles::matrix::Matrix;
use ramcycles::oracle::{
    enumerate_vertices, verify_structure_theorems, EnumerationBounds, GeneratorOrder, VertexSet,
};
use ramcycles::padic::{parse_rational, DEFAULT_FACTOR_BOUND};
use ramcycles::{
    cycle_invariants, hilbert_symbol, jordan_split, CycleStatus, Error, HermLattice, OhElement,
    RamifiedContext,
};

#[derive(Parser)]
#[command(
    name = "ramcycles",
    version,
    about = "Hermitian lattice invariants over ramified quadratic extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan splitting of a Gram matrix.
    Jordan(ContextArgs),
    /// Dimension and irreducibility of the local cycle of T.
    Cycle(LocalArgs),
    /// Enumerate vertex lattices of L.
    Vertices(OracleArgs),
    /// Compare the vertex census with the cycle invariants.
    Verify(OracleArgs),
    /// Global report for a Hermitian matrix over an imaginary quadratic field.
    Global(GlobalArgs),
    /// Quadratic Hilbert symbol (a, b)_v.
    Hilbert(InputArg),
}

#[derive(Args)]
struct InputArg {
    /// Request file; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Args)]
struct ContextArgs {
    #[command(flatten)]
    input: InputArg,
    /// Odd residue characteristic.
    #[arg(long)]
    p: u64,
    /// Unit ε with π² = εp.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    epsilon: String,
    /// Non-square unit δ²; defaults to the smallest positive non-residue mod p.
    #[arg(long, allow_hyphen_values = true)]
    delta_sq: Option<String>,
}

#[derive(Args)]
struct LocalArgs {
    #[command(flatten)]
    context: ContextArgs,
    /// Treat the input as the Gram matrix of L instead of T.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    local: LocalArgs,
    #[arg(long, default_value_t = EnumerationBounds::default().max_candidates)]
    max_candidates: u64,
    #[arg(long, default_value_t = EnumerationBounds::default().max_rank)]
    max_rank: usize,
    #[arg(long, default_value_t = EnumerationBounds::default().max_scale)]
    max_scale: i64,
    /// Add a Graphviz rendering of the inclusion order under `dot`.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct GlobalArgs {
    #[command(flatten)]
    input: InputArg,
    /// Trial-division bound for factoring det T and Δ.
    #[arg(long, default_value_t = DEFAULT_FACTOR_BOUND)]
    factor_bound: u64,
}

/// Machine-readable error printed on standard error.
#[derive(Serialize)]
struct ErrorRecord {
    code: &'static str,
    message: String,
    location: Option<String>,
}

/// Failure of a command, with its exit code.
struct Failure {
    exit: u8,
    record: ErrorRecord,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match &e {
            Error::Schema { .. }
            | Error::Parse(_)
            | Error::Dimension(_)
            | Error::HermitianViolation { .. } => 1,
            e if e.is_resource() => 3,
            _ => 2,
        };
        Failure {
            exit,
            record: ErrorRecord {
                code: e.code(),
                message: e.to_string(),
                location: rjson::error_location(&e),
            },
        }
    }
}

fn read_input(arg: &InputArg) -> Result<Value, Failure> {
    let text = match &arg.input {
        Some(path) if path.as_os_str() != "-" => {
            std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| io_failure(&PathBuf::from("-"), e))?;
            s
        }
    };
    Ok(rjson::parse_document(&text)?)
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure {
        exit: 1,
        record: ErrorRecord {
            code: "io",
            message: e.to_string(),
            location: Some(path.display().to_string()),
        },
    }
}

fn flag_rational(value: &str, flag: &str) -> Result<ramcycles::Rational, Error> {
    parse_rational(value).map_err(|e| Error::Schema {
        location: flag.into(),
        message: e.to_string(),
    })
}

fn context(args: &ContextArgs) -> Result<RamifiedContext, Error> {
    let eps = flag_rational(&args.epsilon, "--epsilon")?;
    let delta_sq = args
        .delta_sq
        .as_deref()
        .map(|d| flag_rational(d, "--delta-sq"))
        .transpose()?;
    local_context(args.p, eps, delta_sq)
}

/// Context fields echoed in every local output.
#[derive(Serialize)]
struct ContextEcho {
    p: u64,
    epsilon: RationalString,
    delta_sq: RationalString,
}

impl ContextEcho {
    fn of(ctx: &RamifiedContext) -> Self {
        ContextEcho {
            p: ctx.p(),
            epsilon: RationalString(ctx.epsilon().clone()),
            delta_sq: RationalString(ctx.delta_sq().clone()),
        }
    }
}

#[derive(Serialize)]
struct CycleOutput {
    #[serde(flatten)]
    context: ContextEcho,
    #[serde(flatten)]
    status: CycleStatus,
    /// First entry of T with negative π-order.
    #[serde(skip_serializing_if = "Option::is_none")]
    nonintegral_entry: Option<[usize; 2]>,
    /// Gram matrix of L; feeding it back with `--raw` reproduces this output.
    #[serde(skip_serializing_if = "Option::is_none")]
    gram: Option<Matrix<OhElement>>,
}

#[derive(Serialize)]
struct VerticesOutput {
    #[serde(flatten)]
    context: ContextEcho,
    gram: Matrix<OhElement>,
    #[serde(flatten)]
    set: VertexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    dot: Option<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    context: ContextEcho,
    gram: Matrix<OhElement>,
    all_passed: bool,
    #[serde(flatten)]
    report: ramcycles::oracle::VerificationReport,
}

#[derive(Serialize)]
struct HilbertOutput {
    a: RationalString,
    b: RationalString,
    place: String,
    value: i8,
}

fn render<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// The Gram matrix of L: the input itself with `--raw`, else `u₀·T`.
fn lattice_gram(args: &LocalArgs) -> Result<(RamifiedContext, HermGram), Failure> {
    let doc = read_input(&args.context.input)?;
    let ctx = context(&args.context)?;
    let g = rjson::local_gram(&doc, &ctx)?;
    if args.raw {
        return Ok((ctx, g));
    }
    match build_cycle_lattice(&g)? {
        CycleLattice::Lattice(l) => Ok((ctx, l)),
        CycleLattice::EmptyNonintegral { .. } => Err(Error::NotIntegral.into()),
    }
}

fn run_jordan(args: &ContextArgs) -> Result<String, Failure> {
    let doc = read_input(&args.input)?;
    let ctx = context(args)?;
    let g = rjson::local_gram(&doc, &ctx)?;
    Ok(render(&jordan_split(&g)?))
}

fn run_cycle(args: &LocalArgs) -> Result<String, Failure> {
    let doc = read_input(&args.context.input)?;
    let ctx = context(&args.context)?;
    let t = rjson::local_gram(&doc, &ctx)?;
    let lattice = if args.raw {
        CycleLattice::Lattice(t)
    } else {
        build_cycle_lattice(&t)?
    };
    let out = match lattice {
        CycleLattice::EmptyNonintegral { row, col } => CycleOutput {
            context: ContextEcho::of(&ctx),
            status: CycleStatus::EmptyNonintegral,
            nonintegral_entry: Some([row, col]),
            gram: None,
        },
        CycleLattice::Lattice(g) => CycleOutput {
            context: ContextEcho::of(&ctx),
            status: CycleStatus::Nonempty(cycle_invariants(&g)?),
            nonintegral_entry: None,
            gram: Some(g.matrix().clone()),
        },
    };
    Ok(render(&out))
}

fn enumerate(args: &OracleArgs) -> Result<(RamifiedContext, HermLattice, VertexSet), Failure> {
    let (ctx, g) = lattice_gram(&args.local)?;
    let bounds = EnumerationBounds {
        max_rank: args.max_rank,
        max_scale: args.max_scale,
        max_candidates: args.max_candidates,
    };
    let l = HermLattice::standard(g);
    let set = enumerate_vertices(&l, &bounds, GeneratorOrder::Forward)?;
    Ok((ctx, l, set))
}

fn run_vertices(args: &OracleArgs) -> Result<String, Failure> {
    let (ctx, l, set) = enumerate(args)?;
    let out = VerticesOutput {
        context: ContextEcho::of(&ctx),
        gram: l.ambient().matrix().clone(),
        dot: args.dot.then(|| set.to_dot()),
        set,
    };
    Ok(render(&out))
}

fn run_verify(args: &OracleArgs) -> Result<String, Failure> {
    let (ctx, l, set) = enumerate(args)?;
    let report = verify_structure_theorems(&l, &set)?;
    let out = VerifyOutput {
        context: ContextEcho::of(&ctx),
        gram: l.ambient().matrix().clone(),
        all_passed: report.all_passed(),
        report,
    };
    Ok(render(&out))
}

fn run_global(args: &GlobalArgs) -> Result<String, Failure> {
    let doc = read_input(&args.input)?;
    let input: GlobalInput = rjson::from_value(&doc, "$")?;
    let t = input.into_hermitian()?;
    Ok(render(&global_report(&t, args.factor_bound)?))
}

fn run_hilbert(args: &InputArg) -> Result<String, Failure> {
    let doc = read_input(args)?;
    let (a, b, place) = rjson::hilbert_request(&doc)?;
    let value = hilbert_symbol(&a, &b, place)?;
    Ok(render(&HilbertOutput {
        a: RationalString(a),
        b: RationalString(b),
        place: place.to_string(),
        value,
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let record = ErrorRecord {
                code: "usage",
                message: e.to_string().trim_end().to_string(),
                location: None,
            };
            eprintln!("{}", render(&record));
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Jordan(a) => run_jordan(a),
        Command::Cycle(a) => run_cycle(a),
        Command::Vertices(a) => run_vertices(a),
        Command::Verify(a) => run_verify(a),
        Command::Global(a) => run_global(a),
        Command::Hilbert(a) => run_hilbert(a),
    };
    match result {
        Ok(text) => {
            // a closed pipe downstream is not an error of this program
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", render(&f.record));
            ExitCode::from(f.exit)
        }
    }
}
