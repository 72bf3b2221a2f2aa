//! Command-line front end.
//!
//! Every command writes to stdout unless `--output` names a file. Seeds are
//! always taken from the command line (default shown in `--help`). Exit
//! codes: 0 success, 1 inconclusive relation, 2 invalid input, 3 checkpoint
//! mismatch, 4 I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classes::{
    enumerate_classes, honeycomb, honeycomb_edges, r23_table, to_dot, ClassTable,
};
use crate::error::Error;
use crate::extrema::{brute_force_extrema, census, CensusConfig};
use crate::order::{derive_relation, RelationKind, RelationSearch, RuleSet};
use crate::probability::{LogBase, Spectrum};
use crate::qubit2::{grid_csv, octahedron_scan, ScanFunction};

/// Version of the JSON field layout documented in `docs/schema.md`.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESUME: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-cmi",
    version,
    about = "Classical mutual information extrema over arrangements of a fixed spectrum"
)]
pub struct Cli {
    /// Logarithm base for reported information values
    #[arg(long, global = true, value_enum, default_value_t = BaseArg::E)]
    pub log_base: BaseArg,

    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format (each command accepts a subset; default depends on the command)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::E => LogBase::E,
            BaseArg::Two => LogBase::Two,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RulesArg {
    /// Majorisation and the single-transposition test
    All,
    /// Symbolic matrix majorisation only
    Majorisation,
}

#[derive(Debug, Args)]
pub struct Shape {
    /// Number of rows
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Number of columns
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extremal classes for one spectrum (JSON)
    Extrema {
        #[command(flatten)]
        shape: Shape,
        /// Comma-separated probabilities; sorted and renormalised after a 1e-9 sum check
        #[arg(long)]
        spectrum: String,
    },
    /// Monte Carlo census of realised extremal classes (JSON, or CSV convergence curve)
    Census {
        #[command(flatten)]
        shape: Shape,
        /// Number of sampled spectra
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Master seed
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Worker threads (results do not depend on this)
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also write the convergence curve as CSV to this file
        #[arg(long)]
        convergence: Option<PathBuf>,
        /// Resumable checkpoint file
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Certified relation between two classes (text or JSON)
    Relation {
        #[command(flatten)]
        shape: Shape,
        /// First class index
        #[arg(long)]
        a: usize,
        /// Second class index
        #[arg(long)]
        b: usize,
        /// Rules allowed for a single step
        #[arg(long, value_enum, default_value_t = RulesArg::All)]
        rules: RulesArg,
        /// Maximum chain length
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Hexagon majorisation graph of the 2x3 classes with the xi pairing (DOT or JSON)
    Honeycomb,
    /// Two-qubit functional on the octahedron lattice (CSV or JSON)
    #[command(name = "qubit2-scan")]
    Qubit2Scan {
        /// One of gamma-max, gamma-min, i-max-qmi, i-min, i-max-class
        #[arg(long, default_value = "gamma-max")]
        function: String,
        /// Lattice points per axis
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CheckpointMismatch(_) => EXIT_RESUME,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(command: &str, body: T) -> Result<String, Failure> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| input_error(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn pick(format: Option<Format>, allowed: &[Format], command: &str) -> Result<Format, Failure> {
    match format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(input_error(format!(
            "{command} does not support --format {}",
            f.to_possible_value().unwrap().get_name()
        ))),
    }
}

fn table_for(m: usize, n: usize) -> Result<ClassTable, Failure> {
    if (m, n) == (2, 3) {
        Ok(r23_table()?)
    } else {
        Ok(enumerate_classes(m, n)?)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

/// Runs one command; returns the rendered output and the exit code.
fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let base: LogBase = cli.log_base.into();
    match &cli.command {
        Command::Extrema { shape, spectrum } => {
            pick(cli.format, &[Format::Json], "extrema")?;
            let table = table_for(shape.m, shape.n)?;
            let s = Spectrum::parse(spectrum)?;
            let report = brute_force_extrema(&table, &s)?.in_base(base);
            Ok((json("extrema", report)?, EXIT_OK))
        }
        Command::Census {
            shape,
            samples,
            seed,
            workers,
            convergence,
            checkpoint,
        } => {
            let format = pick(cli.format, &[Format::Json, Format::Csv], "census")?;
            let table = table_for(shape.m, shape.n)?;
            let cfg = CensusConfig {
                m: shape.m,
                n: shape.n,
                samples: *samples,
                seed: *seed,
                workers: *workers,
                checkpoint: checkpoint.clone(),
            };
            let report = census(&table, &cfg)?;
            if let Some(path) = convergence {
                write_file(path, &report.convergence_csv())?;
            }
            let out = match format {
                Format::Csv => report.convergence_csv(),
                _ => json("census", &report)?,
            };
            Ok((out, EXIT_OK))
        }
        Command::Relation {
            shape,
            a,
            b,
            rules,
            depth,
        } => {
            let format = pick(cli.format, &[Format::Text, Format::Json], "relation")?;
            let table = table_for(shape.m, shape.n)?;
            let search = RelationSearch {
                max_depth: *depth,
                rules: match rules {
                    RulesArg::All => RuleSet::All,
                    RulesArg::Majorisation => RuleSet::Majorisation,
                },
            };
            let v = derive_relation(&table, *a, *b, &search)?;
            let code = if v.kind == RelationKind::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            let out = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        a: usize,
                        b: usize,
                        kind: String,
                        certificate: &'a [String],
                    }
                    json(
                        "relation",
                        Body {
                            a: *a,
                            b: *b,
                            kind: v.kind.to_string(),
                            certificate: v.certificate.lines(),
                        },
                    )?
                }
                _ => format!("{}\n{}", v.kind, v.certificate.render()),
            };
            Ok((out, code))
        }
        Command::Honeycomb => {
            let format = pick(cli.format, &[Format::Dot, Format::Json], "honeycomb")?;
            let table = r23_table()?;
            let out = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body {
                        hexagons: Vec<crate::classes::Hexagon>,
                        edges: Vec<crate::classes::ClassEdge>,
                    }
                    json(
                        "honeycomb",
                        Body {
                            hexagons: honeycomb(&table)?,
                            edges: honeycomb_edges(&table)?,
                        },
                    )?
                }
                _ => {
                    let nodes: Vec<usize> = (1..=table.len()).collect();
                    to_dot("honeycomb", &table, &nodes, &honeycomb_edges(&table)?)?
                }
            };
            Ok((out, EXIT_OK))
        }
        Command::Qubit2Scan { function, grid } => {
            let format = pick(cli.format, &[Format::Csv, Format::Json], "qubit2-scan")?;
            let f: ScanFunction = function.parse()?;
            let records = octahedron_scan(f, *grid, base)?;
            let out = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        function: String,
                        grid: usize,
                        log_base: LogBase,
                        records: &'a [crate::qubit2::GridRecord],
                    }
                    json(
                        "qubit2-scan",
                        Body {
                            function: f.to_string(),
                            grid: *grid,
                            log_base: base,
                            records: &records,
                        },
                    )?
                }
                _ => grid_csv(&records),
            };
            Ok((out, EXIT_OK))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `stdout` and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok((out, code)) => {
            let written = match &cli.output {
                Some(path) => write_file(path, &out),
                None => stdout.write_all(out.as_bytes()).map_err(|e| Failure {
                    code: EXIT_IO,
                    message: e.to_string(),
                }),
            };
            match written {
                Ok(()) => code,
                Err(f) => {
                    let _ = writeln!(stderr, "error: {}", f.message);
                    f.code
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
