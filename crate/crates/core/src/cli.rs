//! Command-line front end.
//!
//! Exit codes: 0 success, 1 no strongly stable matching (or blocking edges
//! found by `check`), 2 bad input, 3 oracle cap exceeded.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::instance::{generate_random, parse_instance, serialize_instance, GenParams, GenParamsError, Instance, ParseError};
use crate::matching::{format_matching, parse_matching, Matching, MatchingError, NO_MATCHING};
use crate::maxseq::{format_sequence, maximal_sequence, SequenceError};
use crate::oracle::{oracle_enumerate, CapExceeded, DEFAULT_CAP};
use crate::representation::{enumerate_classes, expand_class, format_poset, format_signature, irreducible_classes};
use crate::rotations::{format_rotations, rotation_poset_with_cap, RotationError, DEFAULT_CLASS_CAP};
use crate::solver::{blocking_edges, man_optimal, woman_optimal, NoSolution};
use crate::fixed_edge::stable_pairs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_SOLUTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "strongstable", version, about = "Strongly stable matchings with ties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Men,
    Women,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the man-optimal (or woman-optimal) strongly stable matching.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Side::Men)]
        side: Side,
    },
    /// Print the edges blocking a matching; no output means strongly stable.
    Check {
        file: PathBuf,
        #[arg(long)]
        matching: PathBuf,
    },
    /// Print every edge that lies in some strongly stable matching.
    Pairs { file: PathBuf },
    /// Print the irreducible classes and their covering relation.
    Classes { file: PathBuf },
    /// Print every equivalence class.
    Enumerate {
        file: PathBuf,
        /// List matchings of each class too.
        #[arg(long)]
        expand: bool,
        /// Matchings listed per class with --expand.
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Print a maximal sequence from the man-optimal to the woman-optimal class.
    Sequence { file: PathBuf },
    /// Print the rotation poset.
    Rotations {
        file: PathBuf,
        /// Above this many classes the order is approximate.
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        class_cap: usize,
    },
    /// Print `yes` when some class lies strictly between the two optimal ones.
    Intermediate { file: PathBuf },
    /// Print a seeded random instance.
    Gen {
        #[arg(long)]
        men: usize,
        #[arg(long)]
        women: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0.0)]
        ties: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print every strongly stable matching by exhaustive search.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Matching {
        path: PathBuf,
        #[source]
        source: MatchingError,
    },
    #[error("{0}: matching file says {NO_MATCHING}")]
    NoMatchingGiven(PathBuf),
    #[error(transparent)]
    Gen(#[from] GenParamsError),
    #[error("no strongly stable matching exists")]
    NoSolution,
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoSolution => EXIT_NO_SOLUTION,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Internal(_) => 101,
            _ => EXIT_INPUT,
        }
    }
}

impl From<NoSolution> for CliError {
    fn from(_: NoSolution) -> Self {
        CliError::NoSolution
    }
}

impl From<SequenceError> for CliError {
    fn from(e: SequenceError) -> Self {
        match e {
            SequenceError::NoSolution(_) => CliError::NoSolution,
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<RotationError> for CliError {
    fn from(e: RotationError) -> Self {
        match e {
            RotationError::NoSolution(_) => CliError::NoSolution,
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Command output plus exit code. Output is written even on a nonzero code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn pair_lines(inst: &Instance, pairs: impl IntoIterator<Item = (usize, usize)>) -> String {
    let mut named: Vec<(&str, &str)> = pairs
        .into_iter()
        .map(|(m, w)| (inst.man_id(m), inst.woman_id(w)))
        .collect();
    named.sort();
    let mut out = String::new();
    for (m, w) in named {
        let _ = writeln!(out, "{m} {w}");
    }
    out
}

fn class_line(out: &mut String, inst: &Instance, k: usize, sig: &crate::matching::Signature) {
    let body = format_signature(inst, sig);
    if body.is_empty() {
        let _ = writeln!(out, "class {k}:");
    } else {
        let _ = writeln!(out, "class {k}: {body}");
    }
}

fn one_line(inst: &Instance, m: &Matching) -> String {
    let text = format_matching(inst, m);
    if text.is_empty() {
        "(empty)".into()
    } else {
        text.lines().collect::<Vec<_>>().join("; ")
    }
}

/// Executes one parsed command.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Solve { file, side } => {
            let inst = load(file)?;
            let result = match side {
                Side::Men => man_optimal(&inst),
                Side::Women => woman_optimal(&inst),
            };
            Ok(match result {
                Ok(m) => Outcome::ok(format_matching(&inst, &m)),
                Err(NoSolution) => Outcome {
                    stdout: format!("{NO_MATCHING}\n"),
                    code: EXIT_NO_SOLUTION,
                },
            })
        }
        Command::Check { file, matching } => {
            let inst = load(file)?;
            let m = parse_matching(&inst, &read(matching)?)
                .map_err(|source| CliError::Matching {
                    path: matching.clone(),
                    source,
                })?
                .ok_or_else(|| CliError::NoMatchingGiven(matching.clone()))?;
            let report = blocking_edges(&inst, &m).map_err(|source| CliError::Matching {
                path: matching.clone(),
                source,
            })?;
            let stdout = pair_lines(
                &inst,
                report.edges.iter().map(|&e| (inst.edge(e).man, inst.edge(e).woman)),
            );
            let code = if report.is_empty() { EXIT_OK } else { EXIT_NO_SOLUTION };
            Ok(Outcome { stdout, code })
        }
        Command::Pairs { file } => {
            let inst = load(file)?;
            man_optimal(&inst)?;
            let pairs = stable_pairs(&inst);
            Ok(Outcome::ok(pair_lines(
                &inst,
                pairs.iter().map(|&e| (inst.edge(e).man, inst.edge(e).woman)),
            )))
        }
        Command::Classes { file } => {
            let inst = load(file)?;
            let poset = irreducible_classes(&inst)?;
            Ok(Outcome::ok(format_poset(&inst, &poset)))
        }
        Command::Enumerate { file, expand, limit } => {
            let inst = load(file)?;
            let mut out = String::new();
            for (k, class) in enumerate_classes(&inst)?.iter().enumerate() {
                class_line(&mut out, &inst, k, &class.signature);
                if *expand {
                    for m in expand_class(&inst, class, *limit) {
                        let _ = writeln!(out, "  {}", one_line(&inst, &m));
                    }
                }
            }
            Ok(Outcome::ok(out))
        }
        Command::Sequence { file } => {
            let inst = load(file)?;
            let seq = maximal_sequence(&inst)?;
            Ok(Outcome::ok(format_sequence(&inst, &seq)))
        }
        Command::Rotations { file, class_cap } => {
            let inst = load(file)?;
            let poset = rotation_poset_with_cap(&inst, *class_cap)?;
            Ok(Outcome::ok(format_rotations(&inst, &poset)))
        }
        Command::Intermediate { file } => {
            let inst = load(file)?;
            let seq = maximal_sequence(&inst)?;
            let answer = if seq.steps() >= 2 { "yes" } else { "no" };
            Ok(Outcome::ok(format!("{answer}\n")))
        }
        Command::Gen {
            men,
            women,
            density,
            ties,
            seed,
        } => {
            let params = GenParams {
                men: *men,
                women: *women,
                edge_density: *density,
                tie_rate: *ties,
                seed: *seed,
            };
            params.validate()?;
            Ok(Outcome::ok(serialize_instance(&generate_random(&params))))
        }
        Command::Oracle { file, cap } => {
            let inst = load(file)?;
            let result = oracle_enumerate(&inst, *cap)?;
            if result.all_stable.is_empty() {
                return Ok(Outcome {
                    stdout: format!("{NO_MATCHING}\n"),
                    code: EXIT_NO_SOLUTION,
                });
            }
            let mut out = String::new();
            for (i, m) in result.all_stable.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&format_matching(&inst, m));
            }
            Ok(Outcome::ok(out))
        }
    }
}

/// Parses `args` (program name first), runs the command and reports errors on
/// `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            if outcome.code == EXIT_NO_SOLUTION && !matches!(cli.command, Command::Check { .. }) {
                let _ = writeln!(stderr, "strongstable: {}", CliError::NoSolution);
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "strongstable: {e}");
            e.exit_code()
        }
    }
}
