use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use munn::json::error_to_json;
use munn::service::{self, exit_code, Options, Request, Verb};
use munn::MunnError;
use serde_json::Value;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Canonicalize,
    Mul,
    Bracket,
    Decompose,
    Verify,
    CheckZpd,
    ScalarLemma,
    XiBounds,
}

impl From<Command> for Verb {
    fn from(c: Command) -> Verb {
        match c {
            Command::Canonicalize => Verb::Canonicalize,
            Command::Mul => Verb::Mul,
            Command::Bracket => Verb::Bracket,
            Command::Decompose => Verb::Decompose,
            Command::Verify => Verb::Verify,
            Command::CheckZpd => Verb::CheckZpd,
            Command::ScalarLemma => Verb::ScalarLemma,
            Command::XiBounds => Verb::XiBounds,
        }
    }
}

/// Exact Munn algebra arithmetic, decompositions and certificates.
///
/// Reads one JSON document (from --input or standard input) and writes one
/// JSON document. Exit status: 0 success, 1 malformed input, 2 unmet
/// hypothesis, 3 search budget exhausted or INCONCLUSIVE under
/// --require-certified.
#[derive(Debug, Parser)]
#[command(name = "munn", version)]
struct Cli {
    #[arg(value_enum)]
    verb: Command,
    /// Input JSON file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Engine for `decompose`.
    #[arg(long, value_parser = mode_names())]
    mode: Option<String>,
    /// `commutator|jordan` for `bracket`, `assoc|jordan` for `check-zpd`.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search budget for `decompose --mode xi1`.
    #[arg(long, default_value_t = munn::commutator::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = munn::zpd::DEFAULT_MAX_CONSTRAINTS)]
    max_constraints: usize,
    #[arg(long)]
    require_certified: bool,
    /// Field size for `scalar-lemma`.
    #[arg(long)]
    p: Option<u64>,
    /// Matrix size for `scalar-lemma`.
    #[arg(long)]
    n: Option<usize>,
}

fn mode_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(service::DecomposeMode::ALL.map(|m| m.name()))
}

fn read_input(path: Option<&PathBuf>) -> Result<Value, MunnError> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| MunnError::Json(format!("{}: {e}", p.display())))?,
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| MunnError::Json(format!("stdin: {e}")))?;
        }
    }
    serde_json::from_str(&text).map_err(|e| MunnError::Json(e.to_string()))
}

fn emit(value: &Value, path: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let _ = emit(&error_to_json(&MunnError::Json(e.kind().to_string())), None);
            return ExitCode::from(1);
        }
    };
    let verb = Verb::from(cli.verb);
    let request = Request {
        mode: cli.mode.clone(),
        kind: cli.kind.clone(),
        p: cli.p,
        n: cli.n,
        options: Options {
            seed: cli.seed,
            budget: cli.budget,
            max_constraints: cli.max_constraints,
            require_certified: cli.require_certified,
        },
    };
    let result = if verb == Verb::ScalarLemma {
        service::run(verb, None, &request)
    } else {
        read_input(cli.input.as_ref()).and_then(|doc| service::run(verb, Some(&doc), &request))
    };
    match result {
        Ok(resp) => {
            if let Err(e) = emit(&resp.value, cli.output.as_ref()) {
                eprintln!("munn: cannot write output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if resp.soft_failure { 3 } else { 0 })
        }
        Err(e) => {
            let _ = emit(&error_to_json(&e), None);
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
