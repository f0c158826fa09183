//! `gamesem` — batch front door to the dialogue-game toolkit.
//!
//! One command per process: check a program's type, evaluate or trace an
//! application, compare two programs' dialogue behaviours, rebuild a term
//! from a strategy table, census the definable input-output tables at a
//! type, or replay a named walkthrough.
//!
//! Exit codes: 0 on success, 1 when the answer itself is negative
//! (`distinct`, `not definable`), 2 on any error.  Diagnostics go to
//! stderr, classed by their source (io / parse / type / table / fuel /
//! input / internal).  `GAMESEM_COLOR=0` disables the little styling
//! there is.

use std::io::IsTerminal;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::rc::Rc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gamesem_core::arena::Arena;
use gamesem_core::automata::{from_playset, term_equiv, AutomataError, TermEquiv};
use gamesem_core::composition::render_interaction;
use gamesem_core::domains::{census, DomainError};
use gamesem_core::interpreter::{
    denote, evaluate, extract_term, trace_application, ExtractError, InterpError, Value,
};
use gamesem_core::plays::render_trace;
use gamesem_core::strategy::table_from_json;
use gamesem_core::syntax::{parse_term, parse_type, typecheck_closed, Term, Type};

#[derive(Parser)]
#[command(name = "gamesem", version, about = "A workbench for programs as dialogue strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Budget for each internal interaction replay.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = at_least_one_u64)]
    fuel: u64,

    /// Visible rounds explored when saturating a strategy.
    #[arg(long, global = true, default_value_t = 8, value_parser = at_least_one_usize)]
    depth: usize,

    /// Largest program size the census enumerates.
    #[arg(long, global = true, default_value_t = 8, value_parser = at_least_one_usize)]
    size_bound: usize,

    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Render the full interaction, middle component included.
    #[arg(long, global = true)]
    show_hidden: bool,

    /// Compare every play prefix instead of complete plays only.
    #[arg(long, global = true)]
    all_plays: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a program, reporting its type and board.
    Check { file: PathBuf },
    /// Evaluate a program applied to ground arguments.
    Eval {
        file: PathBuf,
        /// Arguments, as program text (numerals, tt, ff, or parenthesized terms).
        args: Vec<String>,
    },
    /// Show the dialogue transcript of one application.
    Trace {
        file: PathBuf,
        /// Arguments, as program text; a trailing ground literal is fed interactively.
        args: Vec<String>,
    },
    /// Compare the dialogue behaviours of two programs of one type.
    Equiv { file1: PathBuf, file2: PathBuf },
    /// Rebuild a program from a strategy view table (JSON).
    Extract {
        table: PathBuf,
        /// The board type the table plays on, e.g. "B -> B".
        r#type: String,
    },
    /// Census of the input-output tables definable at a first-order boolean type.
    Census {
        /// The type to survey, e.g. "B -> B -> B".
        r#type: String,
    },
    /// Replay a named walkthrough.
    Demo {
        /// One of: fig1, fig2, por, fixpoint, continuity, nerode.
        name: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn at_least_one_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) | Err(_) => Err("must be a positive integer".into()),
        Ok(n) => Ok(n),
    }
}

fn at_least_one_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err("must be a positive integer".into()),
        Ok(n) => Ok(n),
    }
}

/// A command failure: which class of thing went wrong, and the message.
/// The class keeps the error stream greppable across commands.
struct Failure {
    class: &'static str,
    message: String,
}

impl Failure {
    fn new(class: &'static str, message: impl Into<String>) -> Failure {
        Failure { class, message: message.into() }
    }
}

impl From<InterpError> for Failure {
    fn from(e: InterpError) -> Failure {
        let class = match &e {
            InterpError::Type(_) => "type",
            InterpError::FuelExhausted => "fuel",
            InterpError::NotGround(_) | InterpError::TraceShape(_) => "input",
            InterpError::Internal(_) => "internal",
        };
        Failure::new(class, e.to_string())
    }
}

impl From<AutomataError> for Failure {
    fn from(e: AutomataError) -> Failure {
        let class = match &e {
            AutomataError::TypeMismatch(..) | AutomataError::NotFinitary(_) => "type",
            AutomataError::Unsaturated => "input",
            AutomataError::Interp(InterpError::FuelExhausted) => "fuel",
            _ => "internal",
        };
        Failure::new(class, e.to_string())
    }
}

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Failure {
        let class = match &e {
            DomainError::NotFirstOrderBool(_) | DomainError::NotFinitary(_) => "type",
            DomainError::Interp(InterpError::FuelExhausted) => "fuel",
            _ => "internal",
        };
        Failure::new(class, e.to_string())
    }
}

/// What a successfully parsed command run produced.
enum Outcome {
    /// The command answered affirmatively (or had nothing to judge).
    Done,
    /// The answer is itself negative: `distinct` or `not definable`.
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Check { file } => cmd_check(&cli, file),
        Command::Eval { file, args } => cmd_eval(&cli, file, args),
        Command::Trace { file, args } => cmd_trace(&cli, file, args),
        Command::Equiv { file1, file2 } => cmd_equiv(&cli, file1, file2),
        Command::Extract { table, r#type } => cmd_extract(&cli, table, r#type),
        Command::Census { r#type } => cmd_census(&cli, r#type),
        Command::Demo { name } => cmd_demo(&cli, name),
    };
    match run {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{} error: {}", f.class, f.message);
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// Small shared plumbing.
// ---------------------------------------------------------------------------

fn styled(s: &str, code: &str) -> String {
    let enabled = std::env::var_os("GAMESEM_COLOR").is_none_or(|v| v != "0")
        && std::io::stdout().is_terminal();
    if enabled {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn read_program(path: &FsPath) -> Result<(Term, Type), Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    let term = parse_term(&src)
        .map_err(|e| Failure::new("parse", format!("{}: {e}", path.display())))?;
    let ty = typecheck_closed(&term)
        .map_err(|e| Failure::new("type", format!("{}: {e}", path.display())))?;
    Ok((term, ty))
}

fn parse_args(raw: &[String]) -> Result<Vec<Term>, Failure> {
    raw.iter()
        .map(|s| parse_term(s).map_err(|e| Failure::new("parse", format!("argument {s:?}: {e}"))))
        .collect()
}

fn trace_lines(text: &str) -> Vec<String> {
    text.lines().map(str::to_string).collect()
}

fn unsupported_format(cmd: &str, fmt: Format) -> Failure {
    let name = match fmt {
        Format::Text => "text",
        Format::Json => "json",
        Format::Dot => "dot",
    };
    Failure::new("input", format!("{cmd} has no {name} rendering"))
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(cli: &Cli, file: &FsPath) -> Result<Outcome, Failure> {
    let (_, ty) = read_program(file)?;
    let board = Arena::of_type(&ty);
    match cli.format {
        Format::Text => {
            println!("{}: {ty}", file.display());
            println!(
                "board: {} move occurrence(s), {} opening question(s)",
                board.occs.len(),
                board.initials.len()
            );
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "file": file.display().to_string(),
                    "type": ty.to_string(),
                    "occurrences": board.occs.len(),
                    "openings": board.initials.len(),
                })
            );
        }
        Format::Dot => print!("{}", board.to_dot()),
    }
    Ok(Outcome::Done)
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

fn applied(file: &FsPath, raw_args: &[String]) -> Result<Term, Failure> {
    let (term, _) = read_program(file)?;
    let args = parse_args(raw_args)?;
    let whole = args
        .into_iter()
        .fold(term, |f, a| Term::App(Box::new(f), Box::new(a)));
    typecheck_closed(&whole).map_err(|e| Failure::new("type", e.to_string()))?;
    Ok(whole)
}

fn cmd_eval(cli: &Cli, file: &FsPath, raw_args: &[String]) -> Result<Outcome, Failure> {
    let whole = applied(file, raw_args)?;
    let value = evaluate(&whole, cli.fuel)?;
    match cli.format {
        Format::Text => println!("{value}"),
        Format::Json => {
            let v = match value {
                Value::Num(n) => json!(n),
                Value::Boolean(b) => json!(b),
                Value::Undefined => serde_json::Value::Null,
            };
            println!("{}", json!({ "value": v }));
        }
        Format::Dot => return Err(unsupported_format("eval", Format::Dot)),
    }
    Ok(Outcome::Done)
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

fn literal_value(t: &Term) -> Option<Value> {
    match t {
        Term::NumLit(n) => Some(Value::Num(*n)),
        Term::BoolLit(b) => Some(Value::Boolean(*b)),
        _ => None,
    }
}

fn cmd_trace(cli: &Cli, file: &FsPath, raw_args: &[String]) -> Result<Outcome, Failure> {
    let (term, ty) = read_program(file)?;
    let (params, _) = ty.uncurry();
    if params.is_empty() {
        return Err(Failure::new(
            "input",
            format!("{} has type {ty}, which takes no arguments", file.display()),
        ));
    }
    if raw_args.len() != params.len() {
        return Err(Failure::new(
            "input",
            format!("{} argument(s) given, {} wanted for {ty}", raw_args.len(), params.len()),
        ));
    }
    let mut args = parse_args(raw_args)?;

    // A trailing ground literal is fed move-by-move as the environment's
    // answers, which keeps its questions visible in the transcript; any
    // other argument is composed in as a strategy.
    let mut inputs = Vec::new();
    if let Some(last) = args.last() {
        if params[params.len() - 1].is_ground() {
            if let Some(v) = literal_value(last) {
                inputs.push(v);
                args.pop();
            }
        }
    }

    let at = trace_application(&term, &args, &inputs, cli.fuel)?;
    match cli.format {
        Format::Text => {
            if cli.show_hidden {
                print!("{}", render_interaction(&at.trace));
            } else {
                print!("{}", render_trace(&at.board, &at.residual));
            }
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "interaction": trace_lines(&render_interaction(&at.trace)),
                    "residual": trace_lines(&render_trace(&at.board, &at.residual)),
                })
            );
        }
        Format::Dot => print!("{}", at.board.to_dot()),
    }
    Ok(Outcome::Done)
}

// ---------------------------------------------------------------------------
// equiv
// ---------------------------------------------------------------------------

fn minimal_automaton(t: &Term, cli: &Cli) -> Result<gamesem_core::automata::Dfa, Failure> {
    let d = denote(t, cli.fuel)?;
    let ps = d
        .strategy
        .plays_of(cli.depth, &[])
        .map_err(|e| Failure::new("internal", e.to_string()))?;
    Ok(from_playset(&ps, !cli.all_plays)?)
}

fn cmd_equiv(cli: &Cli, file1: &FsPath, file2: &FsPath) -> Result<Outcome, Failure> {
    let (t1, _) = read_program(file1)?;
    let (t2, _) = read_program(file2)?;
    let verdict = term_equiv(&t1, &t2, cli.depth, cli.fuel, !cli.all_plays)?;

    if cli.format == Format::Dot {
        let d1 = minimal_automaton(&t1, cli)?;
        let d2 = minimal_automaton(&t2, cli)?;
        println!("// {}", file1.display());
        print!("{}", d1.to_dot());
        println!("// {}", file2.display());
        print!("{}", d2.to_dot());
        return Ok(match verdict {
            TermEquiv::IntensionallyEqual => Outcome::Done,
            TermEquiv::Distinct { .. } => Outcome::Negative,
        });
    }

    match verdict {
        TermEquiv::IntensionallyEqual => {
            match cli.format {
                Format::Text => println!("{}", styled("intensionally equal", "32")),
                Format::Json => println!("{}", json!({ "verdict": "intensionally equal" })),
                Format::Dot => unreachable!("handled above"),
            }
            Ok(Outcome::Done)
        }
        TermEquiv::Distinct { board, witness, in_first } => {
            let holder = if in_first { file1 } else { file2 };
            match cli.format {
                Format::Text => {
                    println!("{}", styled("distinct", "31"));
                    println!("witness play, present only in {}:", holder.display());
                    print!("{}", render_trace(&board, &witness));
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "verdict": "distinct",
                            "witness_in": holder.display().to_string(),
                            "witness": trace_lines(&render_trace(&board, &witness)),
                        })
                    );
                }
                Format::Dot => unreachable!("handled above"),
            }
            Ok(Outcome::Negative)
        }
    }
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

fn cmd_extract(cli: &Cli, table: &FsPath, type_text: &str) -> Result<Outcome, Failure> {
    let src = std::fs::read_to_string(table)
        .map_err(|e| Failure::new("io", format!("{}: {e}", table.display())))?;
    let ty = parse_type(type_text).map_err(|e| Failure::new("parse", e.to_string()))?;
    let arena = Rc::new(Arena::of_type(&ty));
    let strategy = table_from_json(arena, &src)
        .map_err(|e| Failure::new("table", format!("{}: {e}", table.display())))?;

    match extract_term(&strategy, &ty, cli.depth) {
        Ok(term) => {
            match cli.format {
                Format::Text => println!("{term}"),
                Format::Json => {
                    println!("{}", json!({ "term": term.to_string(), "type": ty.to_string() }));
                }
                Format::Dot => return Err(unsupported_format("extract", Format::Dot)),
            }
            Ok(Outcome::Done)
        }
        // A well-formed table whose behaviour no program has: a negative
        // answer, not a failure.
        Err(
            e @ (ExtractError::NotInnocent(..)
            | ExtractError::NotBracketed(_)
            | ExtractError::NotCompact(_)
            | ExtractError::BadResponse(_)),
        ) => {
            match cli.format {
                Format::Text => println!("{}", styled("not definable", "31")),
                Format::Json => {
                    println!(
                        "{}",
                        json!({ "verdict": "not definable", "reason": e.to_string() })
                    );
                }
                Format::Dot => return Err(unsupported_format("extract", Format::Dot)),
            }
            eprintln!("{e}");
            Ok(Outcome::Negative)
        }
        Err(e @ (ExtractError::Unsupported(_) | ExtractError::BoardMismatch(..))) => {
            Err(Failure::new("type", e.to_string()))
        }
        Err(ExtractError::Strategy(e)) => Err(Failure::new("table", e.to_string())),
    }
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

fn cmd_census(cli: &Cli, type_text: &str) -> Result<Outcome, Failure> {
    let ty = parse_type(type_text).map_err(|e| Failure::new("parse", e.to_string()))?;
    let summary = census(&ty, cli.size_bound, cli.fuel)?;
    match cli.format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string(&summary)
                    .map_err(|e| Failure::new("internal", e.to_string()))?
            );
        }
        Format::Text => {
            println!("type: {}", summary.type_name);
            println!("size bound: {}", summary.bound);
            println!("distinct definable tables: {}", summary.count);
            println!(
                "contains parallel or: {}",
                if summary.contains_por { "yes" } else { "no" }
            );
            let tables = gamesem_core::domains::definable_extensions(&ty, cli.size_bound, cli.fuel)?;
            for (i, t) in tables.iter().enumerate() {
                println!();
                println!("table {i}:");
                print!("{}", t.to_csv());
            }
        }
        Format::Dot => return Err(unsupported_format("census", Format::Dot)),
    }
    Ok(Outcome::Done)
}

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

fn cmd_demo(cli: &Cli, name: &str) -> Result<Outcome, Failure> {
    if cli.format != Format::Text {
        return Err(unsupported_format("demo", cli.format));
    }
    match gamesem_core::demo::render(name) {
        Some(text) => {
            print!("{text}");
            Ok(Outcome::Done)
        }
        None => Err(Failure::new(
            "input",
            format!(
                "no walkthrough named {name:?}; pick one of {}",
                gamesem_core::demo::NAMES.join(", ")
            ),
        )),
    }
}
