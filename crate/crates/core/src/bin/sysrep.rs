//! Command-line front end: reads a system document, runs the requested
//! analyses, and prints deterministic text or canonical JSON.
//!
//! Exit codes: 0 success, 1 property failure (verify), 2 parse/validation
//! error, 3 guard violation, 4 violated mathematical precondition.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sysrep_core::document::{parse_state, SystemDocument};
use sysrep_core::dynamics::HARD_MAX_STATES;
use sysrep_core::report::{self, AnalysisOptions};
use sysrep_core::{Error, ErrorCategory};

#[derive(Parser)]
#[command(
    name = "sysrep",
    version,
    about = "Exact analysis of discrete-time linear systems over finite fields and the rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: polynomials, factorization, decompositions, period,
    /// orbit census, homomorphism check
    Analyze(CommonArgs),
    /// Print the trajectory of an initial state
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Initial state: comma-separated or a JSON array of canonical
        /// element encodings
        #[arg(long)]
        x0: String,
        /// Number of steps (negative values walk backwards on invertible
        /// time groups)
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        steps: i64,
    },
    /// Run the property verification suites
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Compare a stored analyze --json report byte-for-byte
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Factor the minimal and characteristic polynomials
    Factors(CommonArgs),
    /// Primary decomposition and invariant factors
    Decompose(CommonArgs),
    /// Orbit census with enumeration cross-check
    Orbits(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a system document (JSON)
    path: PathBuf,
    /// Emit canonical JSON (sorted keys, compact) instead of text
    #[arg(long)]
    json: bool,
    /// Override the document seed
    #[arg(long)]
    seed: Option<u64>,
    /// Sample count for homomorphism-style checks
    #[arg(long, default_value_t = 256)]
    trials: u32,
    /// Orbit-census guard on the state count (hard cap 10000000)
    #[arg(long, default_value_t = 1_000_000)]
    max_states: u64,
    /// Worker threads for orbit enumeration
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn exit_code_for(err: &Error) -> u8 {
    match err.category() {
        ErrorCategory::Validation => 2,
        ErrorCategory::Guard => 3,
        ErrorCategory::Precondition => 4,
    }
}

fn load_document(args: &CommonArgs) -> Result<(SystemDocument, AnalysisOptions), u8> {
    if args.max_states > HARD_MAX_STATES {
        eprintln!(
            "error: state space too large: --max-states {} exceeds the hard cap of {HARD_MAX_STATES}",
            args.max_states
        );
        return Err(3);
    }
    if args.trials == 0 {
        eprintln!("error: invalid document: --trials must be at least 1");
        return Err(2);
    }
    let text = std::fs::read_to_string(&args.path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", args.path.display());
        2u8
    })?;
    let doc = SystemDocument::parse_str(&text).map_err(|e| {
        eprintln!("error: {e}");
        exit_code_for(&e)
    })?;
    let opts = AnalysisOptions {
        trials: args.trials,
        max_states: args.max_states,
        workers: args.workers.max(1),
        seed_override: args.seed,
    };
    Ok((doc, opts))
}

fn emit(args: &CommonArgs, rendered: &report::Rendered) {
    if args.json {
        println!("{}", report::canonical_string(&rendered.json));
    } else {
        print!("{}", rendered.text);
    }
}

fn run_simple(
    args: &CommonArgs,
    runner: impl Fn(&SystemDocument, &AnalysisOptions) -> sysrep_core::Result<report::Rendered>,
) -> u8 {
    match load_document(args) {
        Err(code) => code,
        Ok((doc, opts)) => match runner(&doc, &opts) {
            Ok(rendered) => {
                emit(args, &rendered);
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
    }
}

fn run() -> u8 {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => run_simple(&args, report::analyze),
        Command::Factors(args) => run_simple(&args, report::factors_report),
        Command::Decompose(args) => run_simple(&args, report::decompose_report),
        Command::Orbits(args) => run_simple(&args, report::orbits_report),
        Command::Simulate { common, x0, steps } => match load_document(&common) {
            Err(code) => code,
            Ok((doc, _opts)) => {
                let state = match parse_state(&doc.field, &x0) {
                    Ok(s) => s,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return exit_code_for(&e);
                    }
                };
                match report::simulate_report(&doc, &state, steps) {
                    Ok(rendered) => {
                        emit(&common, &rendered);
                        0
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        exit_code_for(&e)
                    }
                }
            }
        },
        Command::Verify { common, expected } => match load_document(&common) {
            Err(code) => code,
            Ok((doc, opts)) => {
                let expected_text = match &expected {
                    None => None,
                    Some(path) => match std::fs::read_to_string(path) {
                        Ok(t) => Some(t),
                        Err(e) => {
                            eprintln!("error: cannot read {}: {e}", path.display());
                            return 2;
                        }
                    },
                };
                match report::verify_report(&doc, &opts, expected_text.as_deref()) {
                    Ok((rendered, pass)) => {
                        emit(&common, &rendered);
                        if pass {
                            0
                        } else {
                            1
                        }
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        exit_code_for(&e)
                    }
                }
            }
        },
    }
}

fn main() -> ExitCode {
    ExitCode::from(run())
}
