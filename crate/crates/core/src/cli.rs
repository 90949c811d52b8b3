//! The `mlcheck` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::format::{self, FormatError, ProofFile, TheoryFile};
use crate::proofterm::norm::{beta_eta_norm, DEFAULT_BUDGET};
use crate::proofterm::{Checker, ReplayError};
use crate::signature::Theory;

pub const EXIT_ACCEPTED: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

pub const BUDGET_ENV: &str = "MLCHECK_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "mlcheck", version, about = "Check proof terms against a theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay a proof and compare it with its claimed proposition.
    Check {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        /// Maximum number of beta/eta contractions per normalization.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Report whether a theory file is wellformed.
    Validate {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the beta-eta normal form of a term.
    Normalize {
        #[arg(long)]
        term: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

/// Why a check did not succeed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// Constructor names from the root of the input to the failure.
    pub path: Vec<String>,
    pub kind: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: &[&str], kind: &str, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            path: path.iter().map(|s| s.to_string()).collect(),
            kind: kind.to_string(),
            message: message.into(),
        }
    }
}

impl From<&ReplayError> for Diagnostic {
    fn from(e: &ReplayError) -> Self {
        Diagnostic::new(&e.path, e.kind.code(), e.kind.to_string())
    }
}

impl From<&FormatError> for Diagnostic {
    fn from(e: &FormatError) -> Self {
        match e {
            FormatError::Syntax(s) => Diagnostic::new(&["input"], "syntax-error", s.to_string()),
            FormatError::DuplicateDeclaration(_) => {
                Diagnostic::new(&["input"], "duplicate-declaration", e.to_string())
            }
            FormatError::IllFormedTheory(c) => {
                Diagnostic::new(&["theory", c], "ill-formed-theory", e.to_string())
            }
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    verdict: &'a str,
    diagnostic_path: Vec<String>,
    kind: Option<String>,
    message: Option<String>,
}

fn verdict_name(code: i32) -> &'static str {
    match code {
        EXIT_ACCEPTED => "accepted",
        EXIT_REJECTED => "rejected",
        _ => "error",
    }
}

struct Reporter<'w> {
    out: &'w mut dyn Write,
    err: &'w mut dyn Write,
    json: bool,
}

impl Reporter<'_> {
    fn finish(&mut self, code: i32, ok_text: &str, diag: Option<Diagnostic>) -> i32 {
        if self.json {
            let report = JsonReport {
                verdict: verdict_name(code),
                diagnostic_path: diag.as_ref().map(|d| d.path.clone()).unwrap_or_default(),
                kind: diag.as_ref().map(|d| d.kind.clone()),
                message: diag.map(|d| d.message),
            };
            let text = serde_json::to_string(&report).expect("report serializes");
            let _ = writeln!(self.out, "{text}");
        } else if let Some(d) = diag {
            let _ = writeln!(self.err, "{}: {}", verdict_name(code), d.kind);
            let _ = writeln!(self.err, "  at: {}", d.path.join("/"));
            let _ = writeln!(self.err, "  {}", d.message);
        } else {
            let _ = writeln!(self.out, "{ok_text}");
        }
        code
    }
}

fn read(path: &Path) -> Result<String, Diagnostic> {
    std::fs::read_to_string(path)
        .map_err(|e| Diagnostic::new(&["input"], "io-error", format!("{}: {e}", path.display())))
}

fn env_budget() -> Result<Option<u64>, Diagnostic> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Diagnostic::new(&["input"], "bad-budget", format!("{BUDGET_ENV}={v:?} is not a number"))
        }),
        Err(_) => Ok(None),
    }
}

fn budget(flag: Option<u64>) -> Result<u64, Diagnostic> {
    Ok(match flag {
        Some(b) => b,
        None => env_budget()?.unwrap_or(DEFAULT_BUDGET),
    })
}

/// Loads a theory file: malformed input is `Err(Err(_))`, an ill-formed
/// theory `Err(Ok(_))`.
fn load_theory(path: &Path) -> Result<Theory, Result<Diagnostic, Diagnostic>> {
    let text = read(path).map_err(Err)?;
    let file: TheoryFile = format::parse_theory_file(&text).map_err(|e| Err((&e).into()))?;
    file.load().map_err(|e| match e {
        FormatError::IllFormedTheory(_) => Ok((&e).into()),
        _ => Err((&e).into()),
    })
}

fn check(theory: &Path, proof: &Path, budget_flag: Option<u64>, r: &mut Reporter) -> i32 {
    let budget = match budget(budget_flag) {
        Ok(b) => b,
        Err(d) => return r.finish(EXIT_MALFORMED, "", Some(d)),
    };
    let thy = match load_theory(theory) {
        Ok(t) => t,
        Err(Ok(d)) => return r.finish(EXIT_REJECTED, "", Some(d)),
        Err(Err(d)) => return r.finish(EXIT_MALFORMED, "", Some(d)),
    };
    let pf: ProofFile = match read(proof).and_then(|s| format::parse_proof(&s).map_err(|e| (&e).into())) {
        Ok(pf) => pf,
        Err(d) => return r.finish(EXIT_MALFORMED, "", Some(d)),
    };
    let checker = match Checker::with_budget(thy, budget) {
        Ok(c) => c,
        Err(e) => {
            let d = Diagnostic::new(&["theory"], "ill-formed-theory", e.to_string());
            return r.finish(EXIT_REJECTED, "", Some(d));
        }
    };
    match checker.check(&pf.proof, &pf.claim) {
        Ok(_) => r.finish(EXIT_ACCEPTED, "accepted", None),
        Err(e) => r.finish(EXIT_REJECTED, "", Some((&e).into())),
    }
}

fn validate(theory: &Path, r: &mut Reporter) -> i32 {
    match load_theory(theory) {
        Ok(_) => r.finish(EXIT_ACCEPTED, "wellformed", None),
        Err(Ok(d)) => r.finish(EXIT_REJECTED, "", Some(d)),
        Err(Err(d)) => r.finish(EXIT_MALFORMED, "", Some(d)),
    }
}

fn normalize(term: &str, budget_flag: Option<u64>, r: &mut Reporter) -> i32 {
    let budget = match budget(budget_flag) {
        Ok(b) => b,
        Err(d) => return r.finish(EXIT_MALFORMED, "", Some(d)),
    };
    let t = match format::parse_term(term) {
        Ok(t) => t,
        Err(e) => return r.finish(EXIT_MALFORMED, "", Some((&e).into())),
    };
    match beta_eta_norm(&t, budget) {
        Some(n) => r.finish(EXIT_ACCEPTED, &format::term_to_sexpr(&n).to_string(), None),
        None => {
            let d = Diagnostic::new(&["normalize"], "budget-exhausted", "normalization budget exhausted");
            r.finish(EXIT_REJECTED, "", Some(d))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_ACCEPTED };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Check {
            theory,
            proof,
            budget,
            json,
        } => check(&theory, &proof, budget, &mut Reporter { out, err, json }),
        Command::Validate { theory, json } => validate(&theory, &mut Reporter { out, err, json }),
        Command::Normalize { term, budget } => normalize(
            &term,
            budget,
            &mut Reporter {
                out,
                err,
                json: false,
            },
        ),
    }
}
