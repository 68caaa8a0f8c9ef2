use clap::{Args, Parser, Subcommand};
use involute_cli::{corpus, recheck, render};
use involute_core::completion::DEFAULT_MAX_STEPS;
use involute_core::linalg::parse_rational;
use involute_core::{
    analyze, parse_with_effective_params, AnalyzeOptions, CompletionError, Rational,
};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

// Exit codes: 0 = success (including an incompatible system — that is a
// result, not a failure), 1 = corpus mismatch, 2 = bad input, 3 = completion
// budget exhausted.
const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "involute",
    version,
    about = "Involutive completion and exact solution counting for linear PDE systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete a system and print its characters and counts
    Analyze(AnalyzeArgs),
    /// Work with the bundled example systems
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// System description file (.pde)
    file: PathBuf,
    /// Emit the full report as JSON
    #[arg(long)]
    json: bool,
    /// Include the step-by-step completion trace
    #[arg(long)]
    trace: bool,
    /// Cross-check: classify Taylor coefficients up to this many orders past
    /// the completed order and compare against the Hilbert function
    #[arg(long, value_name = "R")]
    oracle_orders: Option<u32>,
    /// Override a declared parameter (exact rational, e.g. --param msq=1/4)
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Re-run at shifted parameter values and flag invariant changes
    #[arg(long)]
    recheck_param: bool,
    /// Completion step budget
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List the bundled systems
    List,
    /// Analyze every bundled system and compare it against its reference table
    Run,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze(args) => run_analyze(&args),
        Command::Corpus {
            command: CorpusCommand::List,
        } => {
            for entry in corpus::ENTRIES {
                emit(format!("{:22} {}", entry.name, entry.summary));
            }
            ExitCode::SUCCESS
        }
        Command::Corpus {
            command: CorpusCommand::Run,
        } => run_corpus(),
    }
}

/// Print a line to stdout, exiting quietly if the consumer closed the pipe
/// (e.g. `involute ... | head`).
fn emit(line: impl AsRef<str>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(line.as_ref().as_bytes())
        .and_then(|()| out.write_all(b"\n"))
        .is_err()
    {
        std::process::exit(0);
    }
}

fn parse_param_overrides(specs: &[String]) -> Result<BTreeMap<String, Rational>, String> {
    let mut out = BTreeMap::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("--param expects NAME=VALUE, got '{spec}'"))?;
        let value = parse_rational(value.trim()).map_err(|e| format!("--param {name}: {e}"))?;
        if out.insert(name.trim().to_string(), value).is_some() {
            return Err(format!("--param {name} given twice"));
        }
    }
    Ok(out)
}

fn input_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INPUT)
}

fn run_analyze(args: &AnalyzeArgs) -> ExitCode {
    let overrides = match parse_param_overrides(&args.params) {
        Ok(o) => o,
        Err(e) => return input_error(e),
    };
    let src = match std::fs::read_to_string(&args.file) {
        Ok(s) => s,
        Err(e) => return input_error(format!("{}: {e}", args.file.display())),
    };
    let file_name = args.file.to_string_lossy();
    let (system, params) =
        match parse_with_effective_params(&src, Some(file_name.as_ref()), &overrides) {
            Ok(pair) => pair,
            Err(e) => return input_error(e),
        };

    let opts = AnalyzeOptions {
        max_steps: args.max_steps,
        include_trace: args.trace,
        oracle_levels: args.oracle_orders,
    };
    let mut report = match analyze(&system, &opts) {
        Ok(r) => r,
        Err(CompletionError::BudgetExhausted { max_steps }) => {
            eprintln!(
                "error: completion did not terminate within {max_steps} steps; \
                 the coordinates may be non-generic for this system \
                 (try --max-steps or a linear change of coordinates)"
            );
            return ExitCode::from(EXIT_BUDGET);
        }
        Err(CompletionError::System(e)) => return input_error(e),
    };

    if args.recheck_param {
        if params.is_empty() {
            report
                .warnings
                .push("--recheck-param: the system declares no parameters".to_string());
        } else {
            let shifted = recheck::shifted_params(&params);
            let probe_opts = AnalyzeOptions {
                max_steps: args.max_steps,
                include_trace: false,
                oracle_levels: None,
            };
            let probe = parse_with_effective_params(&src, Some(file_name.as_ref()), &shifted)
                .map_err(|e| e.to_string())
                .and_then(|(s, _)| analyze(&s, &probe_opts).map_err(|e| e.to_string()));
            let shown: Vec<String> = shifted
                .iter()
                .map(|(k, v)| format!("{k} = {}", involute_core::linalg::format_rational(v)))
                .collect();
            match probe {
                Ok(probe_report) => {
                    let special = !recheck::invariants_match(&report, &probe_report);
                    report.parameter_special = Some(special);
                    if special {
                        report.warnings.push(format!(
                            "invariants differ at {}; the declared parameter values are special",
                            shown.join(", ")
                        ));
                    }
                }
                Err(e) => {
                    report.parameter_special = Some(true);
                    report.warnings.push(format!(
                        "analysis at {} failed ({e}); the declared parameter values are special",
                        shown.join(", ")
                    ));
                }
            }
        }
    }

    if args.json {
        emit(serde_json::to_string_pretty(&report).expect("report serialization cannot fail"));
    } else {
        emit(render::render_report(&report).trim_end());
    }
    ExitCode::SUCCESS
}

fn run_corpus() -> ExitCode {
    let mut failed = 0usize;
    for entry in corpus::ENTRIES {
        match corpus::verify(entry) {
            Ok((_, mismatches)) if mismatches.is_empty() => {
                emit(format!("PASS {}", entry.name));
            }
            Ok((_, mismatches)) => {
                failed += 1;
                emit(format!("FAIL {}", entry.name));
                for m in mismatches {
                    emit(format!("     {m}"));
                }
            }
            Err(e) => {
                failed += 1;
                emit(format!("FAIL {} ({e})", entry.name));
            }
        }
    }
    let total = corpus::ENTRIES.len();
    emit(format!("{} passed, {} failed", total - failed, failed));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}
