mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use padic_mzv::frobenius::DEFAULT_W;
use padic_mzv::Error;

use args::{parse_suites, Cli, Command};
use commands::Outcome;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidPrime(_)
        | Error::InvalidPrecision
        | Error::Domain(_)
        | Error::Syntax { .. }
        | Error::UnknownLetter(_)
        | Error::AlphabetMismatch(..)
        | Error::WeightOverflow { .. }
        | Error::InvalidIndex(_)
        | Error::UnsupportedGeometry(_)
        | Error::Config(_) => EXIT_CONFIG,
        Error::PrimeMismatch(..)
        | Error::DivisionByZero
        | Error::CapMismatch(..)
        | Error::NotInvertible
        | Error::InsufficientTerms { .. }
        | Error::SolverFailure { .. }
        | Error::PrecisionUnderflow(_) => EXIT_NUMERIC,
    }
}

fn run(cli: &Cli) -> padic_mzv::Result<Outcome> {
    match &cli.command {
        Command::Pmzv { num, word } => {
            let w = word.resolve()?;
            commands::cmd_pmzv(&num.resolve(commands::default_cap(&w))?, &w)
        }
        Command::Polylog { num, word, z } => {
            let w = word.resolve()?;
            commands::cmd_polylog(&num.resolve(commands::default_cap(&w))?, &w, z)
        }
        Command::Iterint { num, word, from, to } => {
            let w = word.resolve()?;
            commands::cmd_iterint(&num.resolve(commands::default_cap(&w))?, &w, from, to)
        }
        Command::Shuffle { u, v, alphabet } => commands::cmd_shuffle(u, v, alphabet),
        Command::Verify { num, suite } => {
            let suites = parse_suites(suite)?;
            commands::cmd_verify(&num.resolve(DEFAULT_W)?, &suites)
        }
    }
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 || rayon::ThreadPoolBuilder::new().num_threads(k).build_global().is_err() {
            eprintln!("error: cannot start {k} worker threads");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = if cli.pretty {
        out.text
    } else {
        format!("{}\n", out.json)
    };
    match &cli.json_out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => print!("{body}"),
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERIC)
    }
}
