//! Command-line driver. [`run`] does all the work and returns the rendered
//! output, so the binary only prints and exits.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::automaton::{parse_automaton, Automaton, AutomatonError};
use crate::inference::{Analysis, InferenceError};
use crate::lang::{parse_program, LangError, Program};
use crate::lattice::Abstraction;
use crate::oracle::{self, LassoBounds};
use crate::report::{self, Report, ReportOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "buchi", version, about = "Check recursive programs against Büchi trace policies")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Infer effects and check entry procedures against the policy.
    Analyze(AnalyzeArgs),
    /// Dump the classes and pairs of a policy automaton.
    Classes(ClassesArgs),
    /// Run the concrete semantics of a program.
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub program: PathBuf,
    #[arg(long)]
    pub policy: PathBuf,
    /// Procedure to check; defaults to the first one declared.
    #[arg(long, conflicts_with = "all")]
    pub entry: Option<String>,
    /// Check every procedure.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub dump_classes: bool,
    #[arg(long)]
    pub dump_pairs: bool,
}

#[derive(Args, Debug)]
pub struct ClassesArgs {
    #[arg(long)]
    pub policy: PathBuf,
    /// Also print the multiplication table.
    #[arg(long)]
    pub table: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub program: PathBuf,
    /// Procedure to run; defaults to the first one declared.
    #[arg(long = "proc")]
    pub procedure: Option<String>,
    /// Number of calls allowed before an execution is cut.
    #[arg(long, default_value_t = 4)]
    pub budget: usize,
    /// Print the terminating traces of the given iterate instead.
    #[arg(long, conflicts_with = "lasso")]
    pub phi: Option<usize>,
    /// Search for an ultimately periodic execution instead.
    #[arg(long)]
    pub lasso: bool,
    #[arg(long, default_value_t = LassoBounds::default().max_prefix)]
    pub max_prefix: usize,
    #[arg(long, default_value_t = LassoBounds::default().max_period)]
    pub max_period: usize,
    #[arg(long, default_value_t = LassoBounds::default().max_stack)]
    pub max_stack: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Policy { path: PathBuf, source: AutomatonError },
    #[error("{}: {source}", path.display())]
    Program { path: PathBuf, source: LangError },
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("unknown procedure {0}")]
    UnknownProcedure(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_policy(path: &Path) -> Result<Automaton, CliError> {
    parse_automaton(&read(path)?).map_err(|source| CliError::Policy { path: path.to_path_buf(), source })
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    parse_program(&read(path)?).map_err(|source| CliError::Program { path: path.to_path_buf(), source })
}

pub fn run(config: &RunConfig) -> RunOutput {
    let result = match &config.command {
        Command::Analyze(args) => analyze(args),
        Command::Classes(args) => classes(args),
        Command::Oracle(args) => run_oracle(args),
    };
    match result {
        Ok((status, stdout)) => RunOutput { status, stdout, stderr: String::new() },
        Err(e) => RunOutput { status: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<(i32, String), CliError> {
    let policy = load_policy(&args.policy)?;
    let program = load_program(&args.program)?;
    program
        .validate(&policy)
        .map_err(|source| CliError::Program { path: args.program.clone(), source })?;
    let entries: Vec<String> = if args.all {
        program.names().map(str::to_string).collect()
    } else {
        vec![args.entry.clone().unwrap_or_else(|| program.first().to_string())]
    };
    if let Some(e) = entries.iter().find(|e| program.index_of(e).is_none()) {
        return Err(InferenceError::UnknownEntry(e.clone()).into());
    }

    let abs = Abstraction::new(policy);
    let analysis = Analysis::run(&abs, &program)?;
    let verdicts = entries
        .iter()
        .map(|e| analysis.verdict(&abs, &program, e))
        .collect::<Result<Vec<_>, _>>()?;
    let options = ReportOptions { all_classes: args.dump_classes, all_pairs: args.dump_pairs };
    let r = Report { abs: &abs, program: &program, analysis: &analysis, verdicts: &verdicts, options };
    let out = match args.format {
        Format::Text => r.to_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.to_json()).expect("report serializes");
            s.push('\n');
            s
        }
    };
    let status = if verdicts.iter().all(|v| v.passed()) { EXIT_PASS } else { EXIT_FAIL };
    Ok((status, out))
}

fn classes(args: &ClassesArgs) -> Result<(i32, String), CliError> {
    let abs = Abstraction::new(load_policy(&args.policy)?);
    let mut out = report::class_dump(&abs, args.table);
    out.push_str(&report::pair_dump(&abs));
    Ok((EXIT_PASS, out))
}

fn run_oracle(args: &OracleArgs) -> Result<(i32, String), CliError> {
    let program = load_program(&args.program)?;
    program
        .check_calls()
        .map_err(|source| CliError::Program { path: args.program.clone(), source })?;
    let f = args.procedure.clone().unwrap_or_else(|| program.first().to_string());
    if program.index_of(&f).is_none() {
        return Err(CliError::UnknownProcedure(f));
    }

    let mut out = String::new();
    if let Some(n) = args.phi {
        for w in oracle::iterate_phi(&program, n).get(&program, &f) {
            out.push_str(&format!("{}\tlevel-{n}\n", oracle::format_trace(w)));
        }
    } else if args.lasso {
        let bounds = LassoBounds { max_prefix: args.max_prefix, max_period: args.max_period, max_stack: args.max_stack };
        match oracle::search_lasso(&program, &f, bounds) {
            Some(l) => out.push_str(&format!(
                "{}\t{}\tlasso\n",
                oracle::format_trace(&l.prefix),
                oracle::format_trace(&l.period)
            )),
            None => out.push_str("none\n"),
        }
    } else {
        for (w, outcome) in oracle::enumerate_prefixes(&program, &f, args.budget) {
            out.push_str(&format!("{}\t{outcome}\n", oracle::format_trace(&w)));
        }
    }
    Ok((EXIT_PASS, out))
}
