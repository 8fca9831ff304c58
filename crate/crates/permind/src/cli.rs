//! Command-line frontend: solving, interactive play, exhaustive
//! verification, benchmarking, consistency counting and the reduction
//! experiment.
//!
//! Exit codes: 0 success, 2 usage error, 3 inconsistent feedback, 4 bound
//! violation or failed verification, 5 enumeration cap or query budget
//! exceeded, 1 anything else.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, Write};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::analysis::{
    count_consistent, reduction_factor, verify_exhaustive, verify_sampled, AnalysisError,
    SecondQueryMode, VerificationReport, DEFAULT_ENUMERATION_CAP, STATS_CSV_HEADER,
};
use crate::codes::{parse_colors, random_code, GameConfig};
use crate::oracle::{
    Guarded, InteractiveCodemaker, OracleError, QueryBudget, StaticCodemaker, Transcript,
    TRANSCRIPT_VERSION,
};
use crate::solver::{solve_with, SolveError, SolveOptions};

#[derive(Parser)]
#[command(
    name = "permind",
    version,
    about = "Black-peg Mastermind without color repetition: solver, oracles and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a known secret against the built-in codemaker
    Solve(SolveArgs),
    /// You play codemaker: answer the solver's guesses on stdin/stdout
    Play(PlayArgs),
    /// Run the solver against every secret of a configuration
    Verify(VerifyArgs),
    /// Query statistics over seeded random secrets, as CSV
    Bench(BenchArgs),
    /// Count the secrets consistent with a transcript file
    Count(CountArgs),
    /// Worst-case search-space reduction after one or two queries
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Code length (number of positions)
    #[arg(short, long)]
    n: usize,
    /// Number of colors; defaults to n
    #[arg(short, long)]
    k: Option<usize>,
}

impl ConfigArgs {
    fn config(&self) -> Result<GameConfig, CliError> {
        GameConfig::new(self.n, self.k.unwrap_or(self.n))
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// The secret as space-separated colors, e.g. "2 1 4 3"
    #[arg(short, long)]
    secret: Option<String>,
    /// Draw a random secret from this seed instead
    #[arg(long, conflicts_with = "secret")]
    seed: Option<u64>,
    /// Cap on answered queries
    #[arg(long)]
    budget: Option<u64>,
    /// Answer repeated guesses from the record without consuming budget
    #[arg(long)]
    memoize: bool,
    /// Print per-query trace lines to stderr
    #[arg(long)]
    trace: bool,
    /// Write the transcript JSON here instead of stdout
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    budget: Option<u64>,
    /// Answer repeated guesses from the record without asking again
    #[arg(long)]
    memoize: bool,
    /// Write the transcript JSON to this file after the game
    #[arg(short, long)]
    output: Option<String>,
    /// Enumeration cap for locating the inconsistent answer prefix
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Fail any game that exceeds this many queries
    #[arg(long)]
    budget: Option<u64>,
    /// Output format: text or json
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    /// Transcript JSON file
    #[arg(short, long)]
    input: String,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Code length (k = n for this experiment)
    #[arg(short, long)]
    n: usize,
    /// Number of opening queries to analyze (1 or 2)
    #[arg(short, long, value_parser = clap::value_parser!(u8).range(1..=2))]
    depth: u8,
    /// Depth 2 second query: adaptive (maximin), committed (one guess fixed
    /// up front) or opening (the strategy's own second guess)
    #[arg(long, default_value = "adaptive")]
    second: String,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Output format: text or json
    #[arg(long, default_value = "text")]
    format: String,
}

/// A command failure carrying its exit code; the message is printed by
/// [`dispatch`].
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Inconsistent(String),
    BoundViolation(String),
    Capacity(String),
    Other(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::BoundViolation(_) => 4,
            CliError::Capacity(_) => 5,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Inconsistent(m)
            | CliError::BoundViolation(m)
            | CliError::Capacity(m)
            | CliError::Other(m) => m,
        }
    }
}

fn solve_error_to_cli(e: &SolveError) -> CliError {
    match e {
        SolveError::Oracle(OracleError::BudgetExceeded { .. }) => {
            CliError::Capacity(e.to_string())
        }
        SolveError::Oracle(
            OracleError::MalformedAnswer { .. }
            | OracleError::AnswerOutOfRange { .. }
            | OracleError::StreamClosed,
        ) => CliError::Usage(e.to_string()),
        SolveError::InconsistentFeedback { .. } => CliError::Inconsistent(e.to_string()),
        _ => CliError::Other(e.to_string()),
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::CapExceeded { .. } => CliError::Capacity(e.to_string()),
            AnalysisError::Code(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

fn emit(output: &Option<String>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Parses argv, runs the subcommand and returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Play(args) => run_play(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
        Command::Count(args) => run_count(args),
        Command::Experiment(args) => run_experiment(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let config = args.config.config()?;
    let secret = match (&args.secret, args.seed) {
        (Some(text), None) => {
            let raw = parse_colors(text)
                .map_err(|e| CliError::Usage(format!("cannot parse secret: {e}")))?;
            config
                .validate_code(&raw)
                .map_err(|e| CliError::Usage(format!("invalid secret: {e}")))?
        }
        (None, Some(seed)) => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            random_code(config, &mut rng)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "provide the secret with --secret or draw one with --seed".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    };
    let maker = StaticCodemaker::new(config, secret)
        .map_err(|e| CliError::Usage(format!("invalid secret: {e}")))?;
    let budget = args
        .budget
        .map_or_else(QueryBudget::unlimited, QueryBudget::limited);
    let mut oracle = Guarded::new(maker, budget, args.memoize);
    let stderr = io::stderr();
    let mut trace_sink;
    let trace: Option<&mut dyn Write> = if args.trace {
        trace_sink = stderr.lock();
        Some(&mut trace_sink)
    } else {
        None
    };
    let run = solve_with(
        &mut oracle,
        SolveOptions {
            record_transcript: true,
            trace,
            observer: None,
        },
    );
    let transcript = run.transcript.expect("recording was enabled");
    emit(&args.output, &format!("{}\n", transcript.to_json()))?;
    match run.error {
        None => Ok(()),
        Some(e) => Err(solve_error_to_cli(&e)),
    }
}

/// Drives a full interactive game over the given streams. Returns the
/// transcript (if any guesses were answered) alongside the outcome; the
/// final `SECRET:`/`ERROR:` line has already been written.
pub fn play_streams(
    config: GameConfig,
    input: &mut dyn BufRead,
    output: &mut dyn Write,
    budget: Option<u64>,
    memoize: bool,
    cap: u64,
) -> (Option<Transcript>, Result<(), CliError>) {
    let budget = budget.map_or_else(QueryBudget::unlimited, QueryBudget::limited);
    let run = {
        let maker = InteractiveCodemaker::new(config, input, output);
        let mut oracle = Guarded::new(maker, budget, memoize);
        solve_with(&mut oracle, SolveOptions::default())
    };
    let outcome = match (&run.error, &run.secret) {
        (None, Some(secret)) => {
            let line = writeln!(output, "SECRET: {secret}");
            line.map_err(CliError::from)
        }
        (Some(e), _) => {
            let detail = diagnose_failure(config, run.transcript.as_ref(), cap, e);
            let _ = writeln!(output, "ERROR: {detail}");
            Err(solve_error_to_cli(e))
        }
        (None, None) => {
            let _ = writeln!(output, "ERROR: game ended without an outcome");
            Err(CliError::Other("game ended without an outcome".into()))
        }
    };
    let _ = output.flush();
    (run.transcript, outcome)
}

/// For inconsistent feedback on a small enough space, pinpoint the shortest
/// answer prefix that already rules out every secret.
fn diagnose_failure(
    config: GameConfig,
    transcript: Option<&Transcript>,
    cap: u64,
    error: &SolveError,
) -> String {
    if matches!(error, SolveError::InconsistentFeedback { .. }) {
        if let Some(t) = transcript {
            if config.code_space().is_some_and(|s| s <= cap as u128) {
                for prefix in 1..=t.entries.len() {
                    if let Ok(0) = count_consistent(config, &t.entries[..prefix], cap) {
                        return format!(
                            "inconsistent feedback: the answers up to guess {prefix} \
                             admit no secret"
                        );
                    }
                }
            }
        }
    }
    error.to_string()
}

fn run_play(args: PlayArgs) -> Result<(), CliError> {
    let config = args.config.config()?;
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut input = stdin.lock();
    let mut output = stdout.lock();
    let (transcript, outcome) = play_streams(
        config,
        &mut input,
        &mut output,
        args.budget,
        args.memoize,
        args.cap,
    );
    drop(output);
    if let (Some(path), Some(t)) = (&args.output, &transcript) {
        fs::write(path, format!("{}\n", t.to_json()))?;
    }
    outcome
}

fn report_outcome(report: &VerificationReport) -> Result<(), CliError> {
    if !report.all_solved() {
        return Err(CliError::BoundViolation(format!(
            "{} of {} secrets failed (first: {})",
            report.failures.len(),
            report.secrets_tested,
            report.failures[0].reason
        )));
    }
    if report.bound_violations > 0 {
        return Err(CliError::BoundViolation(format!(
            "{} games exceeded the {}-query bound",
            report.bound_violations, report.bound
        )));
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let config = args.config.config()?;
    let report = verify_exhaustive(config, args.cap, args.budget)?;
    let rendered = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&report)
            .map(|s| format!("{s}\n"))
            .map_err(|e| CliError::Other(e.to_string()))?,
        "text" => format!("{report}\n"),
        other => return Err(CliError::Usage(format!("unknown format '{other}'"))),
    };
    emit(&args.output, &rendered)?;
    report_outcome(&report)
}

fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    let config = args.config.config()?;
    if args.trials == 0 {
        return Err(CliError::Usage("bench needs at least one trial".into()));
    }
    let report = verify_sampled(config, args.trials, args.seed, args.budget);
    let csv = format!("{STATS_CSV_HEADER}\n{}\n", report.csv_row());
    emit(&args.output, &csv)?;
    report_outcome(&report)
}

fn run_count(args: CountArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.input)))?;
    let transcript = Transcript::from_json(&text)
        .map_err(|e| CliError::Usage(format!("invalid transcript: {e}")))?;
    if transcript.version != TRANSCRIPT_VERSION {
        return Err(CliError::Usage(format!(
            "unsupported transcript version {}",
            transcript.version
        )));
    }
    let config = transcript
        .config()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let survivors = count_consistent(config, &transcript.entries, args.cap)?;
    println!("{survivors}");
    Ok(())
}

fn run_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let mode = match args.second.as_str() {
        "adaptive" => SecondQueryMode::Adaptive,
        "committed" => SecondQueryMode::Committed,
        "opening" => SecondQueryMode::Opening,
        other => {
            return Err(CliError::Usage(format!(
                "unknown second-query mode '{other}' (expected adaptive, committed or opening)"
            )))
        }
    };
    let result = reduction_factor(args.n, args.depth, mode, args.cap)?;
    match args.format.as_str() {
        "json" => {
            let rendered =
                serde_json::to_string_pretty(&result).map_err(|e| CliError::Other(e.to_string()))?;
            println!("{rendered}");
        }
        "text" => {
            println!(
                "n={} depth={}: worst factor {}/{} = {:.6} ({} of {} secrets survive; \
                 witness answers {:?})",
                result.n,
                result.depth,
                result.factor_numerator,
                result.factor_denominator,
                result.factor,
                result.worst_survivors,
                result.total,
                result.witness_answers
            );
            if let Some(second) = &result.witness_second_guess {
                println!("witness second guess: {second}");
            }
        }
        other => return Err(CliError::Usage(format!("unknown format '{other}'"))),
    }
    Ok(())
}
