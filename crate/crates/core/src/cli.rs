//! The `chasebound` command line.
//!
//! Exit codes: 0 success (terminated, bounded, valid), 1 expected negative
//! result (cap reached, not bounded), 2 usage or input error, 3 budget
//! exceeded, 4 verification or replay failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounded::{check_k_bounded, check_witness_document, BoundMode, BoundedQuery, WitnessDocument};
use crate::chase::{
    breadth_first_completion, restrict, run_breadth_first, verify_derivation, Derivation, HaltReason, Policy,
    RunConfig, Variant,
};
use crate::error::{Error, Result};
use crate::io::{deserialize_trace, export_dot, parse_atom_list, parse_kb, serialize_trace, ParsedDocument};
use crate::logic::{Atom, Null, Term};
use crate::rules::Severity;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable holding the default time budget of `kbounded`.
pub const BUDGET_ENV: &str = "CHASEBOUND_BUDGET_MS";

#[derive(Parser, Debug)]
#[command(
    name = "chasebound",
    version,
    about = "Chase derivations and k-boundedness of existential rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a breadth-first chase on a knowledge base.
    Run(RunArgs),
    /// Decide whether a ruleset is k-bounded for a chase variant.
    Kbounded(KboundedArgs),
    /// Restrict a traced derivation to a subset of its initial facts.
    Restrict(RestrictArgs),
    /// Check a trace (or a witness file) and print the verification report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Det,
    Random,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    variant: Variant,
    #[arg(long, value_enum, default_value = "det")]
    policy: PolicyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-depth", default_value_t = 100)]
    max_depth: usize,
    #[arg(long = "max-steps", default_value_t = 10_000)]
    max_steps: usize,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KboundedArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    k: usize,
    #[arg(long = "bound-mode", default_value = "safe")]
    bound_mode: BoundMode,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Wall-clock budget in milliseconds (default from CHASEBOUND_BUDGET_MS).
    #[arg(long = "budget-ms")]
    budget_ms: Option<u64>,
    /// Maximum number of representative factbases.
    #[arg(long = "budget-factbases")]
    budget_factbases: Option<u64>,
    /// Maximum number of search states per factbase.
    #[arg(long = "budget-states")]
    budget_states: Option<u64>,
}

#[derive(Args, Debug)]
struct RestrictArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Initial atoms to keep, in source syntax, comma separated.
    #[arg(long)]
    keep: String,
    /// Extend the restriction to a breadth-first derivation.
    #[arg(long)]
    complete: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    trace: PathBuf,
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } | Error::ResourceCap(_) => EXIT_BUDGET,
        Error::ReplayFailure { .. } | Error::UnknownTrigger { .. } | Error::NotApplicable { .. } => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_kb(path: &Path, err: &mut dyn Write) -> Result<ParsedDocument> {
    let doc = parse_kb(&read(path)?).map_err(|e| match e {
        Error::Syntax {
            line,
            column,
            message,
            excerpt,
        } => Error::Syntax {
            line,
            column,
            message: format!("{}: {message}", path.display()),
            excerpt,
        },
        other => other,
    })?;
    let mut fatal = None;
    for d in &doc.diagnostics {
        let _ = writeln!(err, "{}: {d}", path.display());
        if d.severity == Severity::Error && fatal.is_none() {
            fatal = Some(d.message.clone());
        }
    }
    match fatal {
        Some(message) => Err(Error::Validation(message)),
        None => Ok(doc),
    }
}

/// Printed names longer than this are shortened in summaries (traces always
/// carry full names).
const SUMMARY_TERM_LIMIT: usize = 60;

fn brief_term(t: &Term) -> String {
    match t {
        Term::Null(null) if t.display_len() > SUMMARY_TERM_LIMIT => match null.as_ref() {
            Null::Fresh(fresh) => format!("_:{}#...#{}", fresh.rule(), fresh.exvar()),
            Null::Initial(_) => t.to_string(),
        },
        _ => t.to_string(),
    }
}

fn brief_atom(a: &Atom) -> String {
    let args: Vec<String> = a.args.iter().map(brief_term).collect();
    format!("{}({})", a.predicate, args.join(","))
}

fn print_levels(d: &Derivation, out: &mut dyn Write) {
    for (rank, level) in d.atoms_by_rank().iter().enumerate() {
        let atoms: Vec<String> = level.iter().map(brief_atom).collect();
        let _ = writeln!(out, "  {rank}: {}", atoms.join(", "));
    }
}

fn cmd_run(args: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let kb = load_kb(&args.kb, err)?.kb;
    let config = RunConfig {
        policy: match args.policy {
            PolicyArg::Det => Policy::Deterministic,
            PolicyArg::Random => Policy::Random(args.seed),
        },
        depth_cap: args.max_depth,
        step_cap: args.max_steps,
    };
    let outcome = run_breadth_first(args.variant, &kb, config);
    let d = &outcome.derivation;
    let _ = writeln!(out, "variant: {}", args.variant);
    let _ = writeln!(out, "halt: {}", outcome.halt);
    let _ = writeln!(out, "steps: {}", d.steps().len());
    let _ = writeln!(out, "depth: {}", d.depth());
    let _ = writeln!(out, "atoms by rank:");
    print_levels(d, out);
    if let Some(path) = &args.trace {
        write(path, &serialize_trace(d, Some(outcome.halt)))?;
    }
    if let Some(path) = &args.dot {
        write(path, &export_dot(d))?;
    }
    Ok(match outcome.halt {
        HaltReason::Terminated => EXIT_OK,
        HaltReason::DepthCap | HaltReason::StepCap => EXIT_NEGATIVE,
    })
}

fn cmd_kbounded(args: KboundedArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let ruleset = load_kb(&args.rules, err)?.kb.ruleset;
    let budget_ms = match args.budget_ms {
        Some(ms) => Some(ms),
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Error::Validation(format!("{BUDGET_ENV} must be a number of milliseconds")))?,
            ),
            Err(_) => None,
        },
    };
    let mut q = BoundedQuery::new(ruleset, args.variant, args.k);
    q.bound_mode = args.bound_mode;
    q.jobs = args.jobs;
    q.budget.deadline = budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms));
    q.budget.max_factbases = args.budget_factbases;
    q.budget.max_states = args.budget_states;
    let _ = writeln!(
        out,
        "ruleset: {} rules, b = {}, factbases up to {} atoms ({:?} mode)",
        q.ruleset.len(),
        q.ruleset.b(),
        q.max_atoms(),
        q.bound_mode
    );
    let verdict = match check_k_bounded(&q) {
        Err(Error::BudgetExceeded {
            reason,
            factbases_examined,
            derivations_examined,
        }) => {
            let _ = writeln!(out, "verdict: unknown ({reason} exceeded)");
            let _ = writeln!(out, "factbases examined: {factbases_examined}");
            let _ = writeln!(out, "derivations examined: {derivations_examined}");
            return Ok(EXIT_BUDGET);
        }
        other => other?,
    };
    let _ = writeln!(
        out,
        "verdict: {} {}-{}-bounded",
        if verdict.bounded { "is" } else { "is not" },
        q.variant,
        q.k
    );
    let _ = writeln!(out, "factbases examined: {}", verdict.factbases_examined);
    let _ = writeln!(out, "derivations examined: {}", verdict.derivations_examined);
    match &verdict.witness {
        None => Ok(EXIT_OK),
        Some(w) => {
            let _ = writeln!(out, "witness factbase: {}", w.factbase);
            let _ = writeln!(out, "minimized factbase: {}", w.minimized_factbase);
            let _ = writeln!(out, "offending atom: {} (rank {})", w.offending_atom, q.k + 1);
            if let Some(path) = &args.witness {
                write(path, &w.to_json())?;
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_restrict(args: RestrictArgs, out: &mut dyn Write) -> Result<i32> {
    let (d, _) = deserialize_trace(&read(&args.trace)?)?;
    let keep = parse_atom_list(&args.keep)?.into_iter().collect();
    let mut result = restrict(&d, &keep)?;
    if args.complete {
        result = breadth_first_completion(d.variant(), &result)?;
    }
    write(&args.out, &serialize_trace(&result, None))?;
    let report = verify_derivation(d.variant(), &result);
    let _ = writeln!(out, "steps: {} of {}", result.steps().len(), d.steps().len());
    let _ = writeln!(out, "depth: {}", result.depth());
    let _ = writeln!(
        out,
        "valid {}-derivation: {}",
        d.variant(),
        report.is_valid_variant_derivation
    );
    let _ = writeln!(out, "breadth-first: {}", report.is_breadth_first());
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let text = read(&args.trace)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("offending_atom").is_some() {
        let doc: WitnessDocument = serde_json::from_value(value)?;
        let w = check_witness_document(&doc)?;
        let report = verify_derivation(w.variant, &w.derivation);
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report)?);
        let _ = writeln!(out, "witness: valid; {} has rank {}", w.offending_atom, w.k + 1);
        return Ok(EXIT_OK);
    }
    let (d, _) = deserialize_trace(&text)?;
    let report = verify_derivation(d.variant(), &d);
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.is_valid_variant_derivation {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

/// Runs the command line and returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args, out, err),
        Command::Kbounded(args) => cmd_kbounded(args, out, err),
        Command::Restrict(args) => cmd_restrict(args, out),
        Command::Verify(args) => cmd_verify(args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::Syntax { excerpt, .. } = &e {
                let _ = writeln!(err, "{excerpt}");
            }
            exit_code(&e)
        }
    }
}
