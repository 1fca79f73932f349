//! `copmin`: exact copositive minima of symmetric rational matrices.
//!
//! One command per process; everything solver-facing is printed as exact
//! rationals (`p/q`, bare integer when q = 1). Exit codes: 0 strictly
//! copositive (or any listing/factorization that succeeded), 2 not strictly
//! copositive, 3 no applicable strategy / needs blocks / nothing found,
//! 4 enumeration node budget exceeded, 64 usage, 1 unreadable input.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use sha2::{Digest, Sha256};

use copmin::bounds::{spn_decompose, SpnOutcome};
use copmin::enumeration::EnumerationLimits;
use copmin::gadgets::{random_matrix, subset_sum_gadget, MatrixClass, SubsetSumInstance};
use copmin::ldlt::{ldlt_decompose, Ldlt, PivotStrategy};
use copmin::matrix::NonnegIntVector;
use copmin::oracle::{brute_force_min, BoxSpec};
use copmin::solver::{
    list_below, min_cop_report, CopMinResult, ListOutcome, SolveOptions, SolveStatus, SolverError,
    Strategy, Witness,
};
use copmin::{Rational, SymRationalMatrix};

const EXIT_NOT_STRICT: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_USAGE: u8 = 64;
const MAX_NODES_VAR: &str = "COPMIN_MAX_NODES";

#[derive(Debug)]
enum CliError {
    /// Bad flags, bad flag values, malformed environment overrides.
    Usage(String),
    /// Unreadable or malformed input data.
    Data(String),
    Budget(u64),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) => f.write_str(msg),
            CliError::Budget(budget) => {
                write!(f, "enumeration node budget of {budget} exceeded")
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => 1,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NodeBudgetExceeded { budget } => CliError::Budget(budget),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "copmin",
    about = "exact copositive minima of symmetric rational matrices",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute min_COP Q and every attaining vector
    Solve(SolveArgs),
    /// Print the exact LDLT factorization
    Ldlt(LdltArgs),
    /// Search for a split Q = S + N (positive semidefinite + nonnegative)
    Spn {
        /// Matrix file (text or JSON format)
        file: PathBuf,
    },
    /// Build the subset-sum gadget matrix
    Gadget(GadgetArgs),
    /// Generate a matrix from a named random class
    Gen(GenArgs),
    /// Brute-force minimum over an explicit box
    Oracle(OracleArgs),
    /// Time the solver over generated instances (CSV on stdout)
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix file (text or JSON format)
    file: PathBuf,
    /// Starting upper bound for the search (default: smallest diagonal entry)
    #[arg(long, value_parser = parse_rational)]
    lambda: Option<Rational>,
    /// List every nonzero z with Q[z] <= the bound instead of minimizing
    #[arg(long, value_parser = parse_rational)]
    list_below: Option<Rational>,
    /// Force one strategy instead of the automatic cascade
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Enumeration worker threads (never affects the result)
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Append a machine-readable run report to stderr
    #[arg(long, value_enum)]
    report: Option<ReportFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Pd,
    Psd,
    OneDifficult,
    Spn,
}

impl StrategyArg {
    fn force(self) -> Option<Strategy> {
        match self {
            StrategyArg::Auto => None,
            StrategyArg::Pd => Some(Strategy::PositiveDefinite),
            StrategyArg::Psd => Some(Strategy::PsdSlice),
            StrategyArg::OneDifficult => Some(Strategy::OneDifficult),
            StrategyArg::Spn => Some(Strategy::SpnSplit),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct LdltArgs {
    /// Matrix file (text or JSON format)
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = PivotArg::Phase12)]
    pivot: PivotArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    None,
    Phase1,
    Phase12,
}

impl From<PivotArg> for PivotStrategy {
    fn from(p: PivotArg) -> Self {
        match p {
            PivotArg::None => PivotStrategy::None,
            PivotArg::Phase1 => PivotStrategy::Phase1,
            PivotArg::Phase12 => PivotStrategy::Phase1Then2,
        }
    }
}

#[derive(Args)]
struct GadgetArgs {
    /// Subset-sum weights, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    /// Subset-sum target
    #[arg(long)]
    s: u64,
    /// Write the matrix to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = MatrixClass::from_str)]
    class: MatrixClass,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    seed: u64,
    /// Magnitude of the integer factor entries
    #[arg(long, default_value_t = 3)]
    range: i64,
    /// Write the matrix to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Matrix file (text or JSON format)
    file: PathBuf,
    /// Uniform bound `B` or per-coordinate bounds `b1,b2,...`
    #[arg(long = "box")]
    box_spec: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = MatrixClass::from_str)]
    class: MatrixClass,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    /// Magnitude of the integer factor entries
    #[arg(long, default_value_t = 3)]
    range: i64,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).map_err(|_| format!("invalid rational {s:?} (expected p/q or integer)"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; only real mistakes get 64.
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Ldlt(args) => cmd_ldlt(args),
        Command::Spn { file } => cmd_spn(&file),
        Command::Gadget(args) => cmd_gadget(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// -- shared plumbing ----------------------------------------------------------

fn read_matrix(path: &Path) -> Result<(Vec<u8>, SymRationalMatrix), CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Data(format!("{}: not valid UTF-8", path.display())))?;
    let q = SymRationalMatrix::parse_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok((bytes, q))
}

fn emit_matrix(m: &SymRationalMatrix, output: Option<&Path>) -> Result<ExitCode, CliError> {
    match output {
        Some(path) => fs::write(path, m.to_text())
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?,
        None => print!("{}", m.to_text()),
    }
    Ok(ExitCode::SUCCESS)
}

fn max_nodes_from_env() -> Result<u64, CliError> {
    match std::env::var(MAX_NODES_VAR) {
        Ok(v) => v.parse().map_err(|_| {
            CliError::Usage(format!("{MAX_NODES_VAR}={v:?} is not a node count"))
        }),
        Err(_) => Ok(EnumerationLimits::default().max_nodes),
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn vector_line(z: &NonnegIntVector) -> String {
    join(z.components())
}

fn status_str(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::StrictlyCopositive => "strictly-copositive",
        SolveStatus::NotStrictlyCopositive => "not-strictly-copositive",
        SolveStatus::NotApplicable => "not-applicable",
    }
}

// -- solve --------------------------------------------------------------------

#[derive(serde::Serialize)]
struct RunReport {
    command: String,
    input_sha256: String,
    status: String,
    strategy: String,
    minimum: String,
    vectors: usize,
    wall_ms: f64,
}

impl RunReport {
    fn emit(&self, format: ReportFormat) {
        match format {
            ReportFormat::Csv => eprintln!(
                "{},{},{},{},{},{},{:.3}",
                self.command,
                self.input_sha256,
                self.status,
                self.strategy,
                self.minimum,
                self.vectors,
                self.wall_ms
            ),
            ReportFormat::Json => eprintln!(
                "{}",
                serde_json::to_string(self).expect("report serializes")
            ),
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, CliError> {
    if let Some(l) = &args.lambda {
        if !l.is_positive() {
            return Err(CliError::Usage("--lambda must be positive".into()));
        }
    }
    if args.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let (bytes, q) = read_matrix(&args.file)?;
    let options = SolveOptions {
        limits: EnumerationLimits {
            max_nodes: max_nodes_from_env()?,
            threads: args.threads,
        },
        force: args.strategy.force(),
        lambda: args.lambda.clone(),
    };

    let started = Instant::now();
    let (code, status, strategy, minimum, vectors) = match &args.list_below {
        Some(bound) => match list_below(&q, bound, &options)? {
            ListOutcome::Listed {
                minimum,
                vectors,
                strategy_used,
            } => {
                print_minimum_and_vectors(minimum.as_ref(), &vectors);
                (
                    ExitCode::SUCCESS,
                    "strictly-copositive".to_string(),
                    strategy_used.to_string(),
                    rational_or_none(minimum.as_ref()),
                    vectors.len(),
                )
            }
            ListOutcome::Unresolved(result) => summarize(&q, &result),
        },
        None => {
            let result = min_cop_report(&q, &options)?.result;
            summarize(&q, &result)
        }
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(format) = args.report {
        RunReport {
            command: "solve".into(),
            input_sha256: format!("{:x}", Sha256::digest(&bytes)),
            status,
            strategy,
            minimum,
            vectors,
            wall_ms,
        }
        .emit(format);
    }
    Ok(code)
}

fn rational_or_none(r: Option<&Rational>) -> String {
    r.map(|m| m.to_string()).unwrap_or_else(|| "none".into())
}

fn print_minimum_and_vectors(minimum: Option<&Rational>, vectors: &[NonnegIntVector]) {
    println!("min = {}", rational_or_none(minimum));
    for z in vectors {
        println!("{}", vector_line(z));
    }
}

/// Print a solve result and fold it into (exit code, report fields).
fn summarize(
    q: &SymRationalMatrix,
    result: &CopMinResult,
) -> (ExitCode, String, String, String, usize) {
    let strategy = result
        .strategy_used
        .map(|s| s.to_string())
        .unwrap_or_else(|| "none".into());
    let code = match result.status {
        SolveStatus::StrictlyCopositive => {
            print_minimum_and_vectors(result.minimum.as_ref(), &result.representatives);
            ExitCode::SUCCESS
        }
        SolveStatus::NotStrictlyCopositive => {
            println!("status = {}", status_str(result.status));
            match &result.witness {
                Some(Witness::Integer(z)) => println!("witness = {}", vector_line(z)),
                Some(Witness::Real(x)) => println!("witness = {}", join(x)),
                None => {}
            }
            if let Some(value) = result.witness_value(q) {
                println!("value = {value}");
            }
            ExitCode::from(EXIT_NOT_STRICT)
        }
        SolveStatus::NotApplicable => {
            println!("status = {}", status_str(result.status));
            let reason = result.reason.expect("not-applicable carries a reason");
            println!("reason = {reason}");
            ExitCode::from(EXIT_UNRESOLVED)
        }
    };
    (
        code,
        status_str(result.status).to_string(),
        strategy,
        rational_or_none(result.minimum.as_ref()),
        result.representatives.len(),
    )
}

// -- ldlt ---------------------------------------------------------------------

fn cmd_ldlt(args: LdltArgs) -> Result<ExitCode, CliError> {
    let (_, q) = read_matrix(&args.file)?;
    match ldlt_decompose(&q, args.pivot.into()) {
        Ok(Ldlt::Factorization(f)) => {
            println!("perm = {}", join(f.perm.map()));
            println!("D = {}", join(&f.d));
            println!("first_difficult = {}", f.first_difficult);
            println!("L:");
            for row in &f.l {
                println!("{}", join(row));
            }
            Ok(ExitCode::SUCCESS)
        }
        Ok(Ldlt::NeedsBlocks { step }) => {
            println!("NEEDS_BLOCKS");
            println!("step = {step}");
            Ok(ExitCode::from(EXIT_UNRESOLVED))
        }
        Err(e) => Err(CliError::Data(e.to_string())),
    }
}

// -- spn ----------------------------------------------------------------------

fn cmd_spn(file: &Path) -> Result<ExitCode, CliError> {
    let (_, q) = read_matrix(file)?;
    match spn_decompose(&q) {
        SpnOutcome::Split(split) => {
            println!("S =");
            print!("{}", split.s.to_text());
            println!("N =");
            print!("{}", split.n.to_text());
            Ok(ExitCode::SUCCESS)
        }
        SpnOutcome::NotFound => {
            println!("NOT_FOUND");
            Ok(ExitCode::from(EXIT_UNRESOLVED))
        }
        SpnOutcome::Inconclusive => {
            println!("INCONCLUSIVE");
            Ok(ExitCode::from(EXIT_UNRESOLVED))
        }
    }
}

// -- generators ----------------------------------------------------------------

fn cmd_gadget(args: GadgetArgs) -> Result<ExitCode, CliError> {
    let inst = SubsetSumInstance::new(args.a, args.s)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    emit_matrix(&subset_sum_gadget(&inst), args.output.as_deref())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    if args.dim < 2 {
        return Err(CliError::Usage("--dim must be at least 2".into()));
    }
    if args.range < 1 {
        return Err(CliError::Usage("--range must be at least 1".into()));
    }
    let generated = random_matrix(args.class, args.dim, args.seed, args.range)
        .map_err(|e| CliError::Data(e.to_string()))?;
    emit_matrix(&generated.matrix, args.output.as_deref())
}

// -- oracle ---------------------------------------------------------------------

fn parse_box(spec: &str, dim: usize) -> Result<BoxSpec, CliError> {
    let parts: Result<Vec<u64>, _> = spec.split(',').map(|t| t.trim().parse()).collect();
    let parts =
        parts.map_err(|_| CliError::Usage(format!("invalid --box {spec:?}")))?;
    match parts.len() {
        1 => Ok(BoxSpec::uniform(dim, parts[0])),
        n if n == dim => Ok(BoxSpec::new(parts)),
        n => Err(CliError::Usage(format!(
            "--box needs 1 or {dim} bounds, found {n}"
        ))),
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, CliError> {
    let (_, q) = read_matrix(&args.file)?;
    let spec = parse_box(&args.box_spec, q.dim())?;
    let (minimum, vectors) =
        brute_force_min(&q, &spec).map_err(|e| CliError::Data(e.to_string()))?;
    print_minimum_and_vectors(Some(&minimum), &vectors);
    Ok(ExitCode::SUCCESS)
}

// -- bench ----------------------------------------------------------------------

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, CliError> {
    if args.dim < 2 {
        return Err(CliError::Usage("--dim must be at least 2".into()));
    }
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    if args.range < 1 {
        return Err(CliError::Usage("--range must be at least 1".into()));
    }
    let options = SolveOptions {
        limits: EnumerationLimits {
            max_nodes: max_nodes_from_env()?,
            ..EnumerationLimits::default()
        },
        ..SolveOptions::default()
    };
    // Stdout carries exactly the CSV; anything else goes to stderr so two
    // runs differ in nothing but the millis column.
    println!("dim,seed,status,strategy,millis");
    let mut tally = [0usize; 4]; // strict, not strict, not applicable, error
    for i in 0..args.count {
        let seed = args.seed + i as u64;
        let generated = match random_matrix(args.class, args.dim, seed, args.range) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("seed {seed}: {e}");
                tally[3] += 1;
                println!("{},{seed},generation-failed,none,0.000", args.dim);
                continue;
            }
        };
        let started = Instant::now();
        let outcome = min_cop_report(&generated.matrix, &options);
        let millis = started.elapsed().as_secs_f64() * 1e3;
        let (status, strategy) = match &outcome {
            Ok(report) => {
                let r = &report.result;
                tally[match r.status {
                    SolveStatus::StrictlyCopositive => 0,
                    SolveStatus::NotStrictlyCopositive => 1,
                    SolveStatus::NotApplicable => 2,
                }] += 1;
                (
                    status_str(r.status).to_string(),
                    r.strategy_used
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| "none".into()),
                )
            }
            Err(SolverError::NodeBudgetExceeded { .. }) => {
                tally[3] += 1;
                ("node-budget-exceeded".to_string(), "none".to_string())
            }
        };
        println!("{},{seed},{status},{strategy},{millis:.3}", args.dim);
    }
    eprintln!(
        "strictly-copositive = {}, not-strictly-copositive = {}, not-applicable = {}, errors = {}",
        tally[0], tally[1], tally[2], tally[3]
    );
    if args.class == MatrixClass::SpnTwoNeg {
        eprintln!("note: the spn2neg sampler is a rejection-scheme stand-in");
    }
    Ok(ExitCode::SUCCESS)
}
