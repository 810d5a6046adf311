//! Command-line interface.
//!
//! Exit status is 0 on success, 1 when a check runs but fails, and 2 for
//! usage errors, unreadable or malformed input, and exhausted budgets.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cohomology::paperfolding_cohomology;
use crate::complexity::complexity_table;
use crate::crease::{generate_recursive, CreasePattern};
use crate::error::Error;
use crate::render::{render_svg, RenderStyle};
use crate::spectral::{
    find_coincidence, is_primitive, DEFAULT_COINCIDENCE_BOUND, DEFAULT_PRIMITIVITY_BOUND,
};
use crate::substitution::{derive_rule, equivalence_check, seed, substitute_n, to_creases};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "paperfold",
    version,
    about = "Multidimensional paperfolding structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Recursion,
    Substitution,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    Equivalence,
    Primitivity,
    Coincidence,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the crease pattern after N folds as JSON.
    Generate {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        #[arg(short = 'n', long = "folds")]
        n: u32,
        #[arg(long, value_enum, default_value = "recursion")]
        method: Method,
        /// With the substitution method, emit the letter pattern instead of creases.
        #[arg(long)]
        letters: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Verify a property of the paperfolding substitution.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        /// Substitution steps (equivalence) or iteration bound (primitivity, coincidence).
        #[arg(short = 'k')]
        k: Option<u32>,
    },
    /// Count distinct cubic windows for n = 1..=N and write CSV.
    Complexity {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Print the cohomology groups of the hull (d = 1 or 2).
    Cohomology {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
    },
    /// Draw a crease pattern JSON file as SVG (d = 1 or 2).
    Render {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long, default_value_t = 16)]
        cell_size: u32,
        #[arg(long, default_value_t = 8)]
        margin: u32,
    },
}

enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write_output(path: Option<&Path>, contents: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, contents)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

fn default_equivalence_steps(dim: usize) -> u32 {
    match dim {
        1 => 8,
        2 => 5,
        _ => 3,
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write output: {e}"));
    match cli.command {
        Command::Generate {
            dim,
            n,
            method,
            letters,
            output,
        } => {
            let json = match method {
                Method::Recursion => {
                    if letters {
                        return Err(Failure::Usage(
                            "--letters requires --method substitution".into(),
                        ));
                    }
                    serde_json::to_string_pretty(&generate_recursive(dim, n)?)
                }
                Method::Substitution => {
                    if n < 2 {
                        return Err(Failure::Usage(
                            "the substitution starts from the seed at n = 2".into(),
                        ));
                    }
                    let grown = substitute_n(&seed(dim)?, &derive_rule(dim)?, n - 2)?;
                    if letters {
                        serde_json::to_string_pretty(&grown)
                    } else {
                        serde_json::to_string_pretty(&to_creases(&grown)?)
                    }
                }
            }
            .map_err(|e| Failure::Usage(format!("cannot serialize: {e}")))?;
            write_output(output.as_deref(), &(json + "\n"), out)
        }
        Command::Check { kind, dim, k } => match kind {
            CheckKind::Equivalence => {
                let report = equivalence_check(dim, k.unwrap_or(default_equivalence_steps(dim)))?;
                writeln!(out, "{report}").map_err(io)?;
                if report.is_equivalent() {
                    Ok(())
                } else {
                    Err(Failure::Check("substitution and recursion differ".into()))
                }
            }
            CheckKind::Primitivity => {
                let report =
                    is_primitive(&derive_rule(dim)?, k.unwrap_or(DEFAULT_PRIMITIVITY_BOUND));
                writeln!(out, "{}", serde_json::json!(report)).map_err(io)?;
                if report.primitive {
                    Ok(())
                } else {
                    Err(Failure::Check(format!(
                        "not primitive within {} steps",
                        report.k
                    )))
                }
            }
            CheckKind::Coincidence => {
                let report =
                    find_coincidence(&derive_rule(dim)?, k.unwrap_or(DEFAULT_COINCIDENCE_BOUND));
                writeln!(out, "{}", report.to_json()).map_err(io)?;
                if report.found {
                    Ok(())
                } else {
                    Err(Failure::Check(format!(
                        "no coincidence up to k = {}",
                        report.k
                    )))
                }
            }
        },
        Command::Complexity { dim, n_max, output } => {
            let table = complexity_table(dim, n_max)?;
            for row in table.mismatches() {
                writeln!(
                    err,
                    "note: n = {} counts {} windows, the closed form gives {}",
                    row.n,
                    row.count,
                    row.formula_value.unwrap_or_default()
                )
                .map_err(io)?;
            }
            for row in table.rows.iter().filter(|r| !r.stabilized) {
                writeln!(err, "note: n = {} did not stabilize", row.n).map_err(io)?;
            }
            write_output(output.as_deref(), &table.to_csv(), out)
        }
        Command::Cohomology { dim } => {
            for (q, group) in paperfolding_cohomology(dim)?.iter().enumerate() {
                writeln!(out, "H^{q} = {group}").map_err(io)?;
            }
            Ok(())
        }
        Command::Render {
            input,
            output,
            cell_size,
            margin,
        } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
            let pattern: CreasePattern = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("malformed pattern JSON: {e}")))?;
            let style = RenderStyle::new(cell_size, margin, 2)?;
            write_output(Some(&output), &render_svg(&pattern, &style)?, out)
        }
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
