//! Command-line front end.
//!
//! Exit codes: `0` separating (or success), `1` not separating (or a failed
//! suite cell), `2` inconclusive (or an empty suite), `3` usage error,
//! `4` input or format error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classify::{
    classify_fourier, classify_schur, yeadon_extract, LinearMap, Status, Verdict,
};
use crate::error::{Error, Result};
use crate::groups::{enumerate_characters, load_group, Character, FiniteGroup};
use crate::linalg::{ComplexMatrix, C64, DEFAULT_TOL};
use crate::schur::{
    herz_schur_symbol, rank_one_unimodular_factor, recover_character, RankOneCertificate,
    RecoveredCharacter, SchurSymbol,
};
use crate::suite::{run_suite, SuiteConfig};
use crate::vna::FourierMultiplier;
use crate::wire;

pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sepmult",
    version,
    about = "Classify separating Fourier and Schur multipliers"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Exponent of the noncommutative L^p space
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Random disjoint pairs / elements per test
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
struct Format {
    /// Compact JSON (default)
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the Fourier multiplier of a symbol on a finite group
    ClassifyFourier {
        /// Builtin name (e.g. cyclic(4), symmetric(3), quaternion8) or JSON file
        #[arg(long)]
        group: String,
        /// JSON array of [re, im] pairs in the group's element order
        #[arg(long)]
        symbol: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classify the Schur multiplier of a square matrix symbol
    ClassifySchur {
        /// JSON matrix {"dim", "re", "im"}
        #[arg(long)]
        symbol: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build the Herz-Schur symbol of a group function and try to recover a scaled character
    HerzSchur {
        #[arg(long)]
        group: String,
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        format: Format,
    },
    /// Extract the Yeadon triple of a Fourier multiplier (with --group), a Schur multiplier, or the transpose map
    Yeadon {
        #[arg(long)]
        group: Option<String>,
        #[arg(
            long,
            required_unless_present = "transpose",
            conflicts_with = "transpose"
        )]
        symbol: Option<PathBuf>,
        /// Use the transpose map on M_n
        #[arg(long, value_name = "N")]
        transpose: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        format: Format,
    },
    /// Run the theorem-verification suite
    VerifyTheorems {
        /// JSON suite config; defaults apply to omitted fields and to a missing flag
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report path, overriding the config's output field
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
    /// Enumerate the one-dimensional characters of a group
    ListCharacters {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        format: Format,
    },
}

/// Exit code for a library error.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Json(_)
        | Error::MalformedMatrix(_)
        | Error::SymbolLength { .. }
        | Error::DimMismatch(..)
        | Error::InvalidGroup(_)
        | Error::UnknownFamily(_)
        | Error::GroupTooLarge(..)
        | Error::InvalidConfig(_) => EXIT_INPUT,
        _ => EXIT_USAGE,
    }
}

fn status_exit_code(status: Status) -> i32 {
    match status {
        Status::Separating => 0,
        Status::NotSeparating => 1,
        Status::Inconclusive => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_symbol(path: &Path) -> Result<Vec<C64>> {
    wire::parse_symbol(&read(path)?)
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn load_arc_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(load_group(spec)?))
}

fn emit(out: &mut dyn Write, format: &Format, value: &impl Serialize) -> Result<()> {
    let text = if format.pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    writeln!(out, "{text}")?;
    Ok(())
}

fn emit_verdict(out: &mut dyn Write, format: &Format, verdict: &Verdict) -> Result<i32> {
    emit(out, format, verdict)?;
    Ok(status_exit_code(verdict.status))
}

#[derive(Serialize)]
struct HerzSchurReport<'a> {
    symbol: &'a ComplexMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<RankOneCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recovered: Option<RecoveredCharacter>,
}

#[derive(Serialize)]
struct CharacterList<'a> {
    order: usize,
    count: usize,
    names: &'a [String],
    characters: Vec<Character>,
}

#[derive(Serialize)]
struct Rejection {
    status: Status,
    reason: String,
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::ClassifyFourier {
            group,
            symbol,
            common,
        } => {
            let g = load_arc_group(&group)?;
            let phi = load_symbol(&symbol)?;
            let v = classify_fourier(&g, &phi, common.p, common.trials, common.seed, common.tol)?;
            emit_verdict(out, &common.format, &v)
        }
        Command::ClassifySchur { symbol, common } => {
            let m = SchurSymbol::new(load_matrix(&symbol)?);
            let v = classify_schur(&m, common.p, common.trials, common.seed, common.tol)?;
            emit_verdict(out, &common.format, &v)
        }
        Command::HerzSchur {
            group,
            symbol,
            tol,
            format,
        } => {
            let g = load_arc_group(&group)?;
            let phi = load_symbol(&symbol)?;
            let m = herz_schur_symbol(&g, &phi)?;
            let certificate = rank_one_unimodular_factor(&m, tol);
            let recovered = certificate
                .as_ref()
                .and_then(|c| recover_character(&g, c, tol));
            let code = if recovered.is_some() { 0 } else { 1 };
            emit(
                out,
                &format,
                &HerzSchurReport {
                    symbol: m.matrix(),
                    certificate,
                    recovered,
                },
            )?;
            Ok(code)
        }
        Command::Yeadon {
            group,
            symbol,
            transpose,
            tol,
            format,
        } => {
            let map = match (group, symbol, transpose) {
                (_, _, Some(n)) => LinearMap::transpose(n),
                (Some(group), Some(path), None) => {
                    let g = load_arc_group(&group)?;
                    LinearMap::fourier(&FourierMultiplier::new(g, load_symbol(&path)?)?)
                }
                (None, Some(path), None) => {
                    LinearMap::schur(&SchurSymbol::new(load_matrix(&path)?))
                }
                (_, None, None) => unreachable!("clap requires --symbol or --transpose"),
            };
            match yeadon_extract(&map, tol) {
                Ok(triple) => {
                    emit(out, &format, &triple)?;
                    Ok(0)
                }
                Err(Error::NotSeparating(reason)) => {
                    writeln!(err, "not separating: {reason}")?;
                    emit(
                        out,
                        &format,
                        &Rejection {
                            status: Status::NotSeparating,
                            reason,
                        },
                    )?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::VerifyTheorems {
            config,
            output,
            format,
        } => {
            let mut cfg = match config {
                Some(path) => SuiteConfig::from_json(&read(&path)?)?,
                None => SuiteConfig::default(),
            };
            if output.is_some() {
                cfg.output = output;
            }
            let report = run_suite(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    let text = if format.json {
                        serde_json::to_string(&report)?
                    } else {
                        serde_json::to_string_pretty(&report)?
                    };
                    std::fs::write(path, text + "\n")?;
                    write!(out, "{}", report.summary())?;
                }
                None => {
                    emit(out, &format, &report)?;
                    write!(err, "{}", report.summary())?;
                }
            }
            Ok(report.exit_code())
        }
        Command::ListCharacters { group, format } => {
            let g = load_group(&group)?;
            let characters = enumerate_characters(&g)?;
            emit(
                out,
                &format,
                &CharacterList {
                    order: g.order(),
                    count: characters.len(),
                    names: g.names(),
                    characters,
                },
            )?;
            Ok(0)
        }
    }
}
