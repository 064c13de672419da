use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use padic_mzv::frobenius::{DEFAULT_N, DEFAULT_P};
use padic_mzv::shuffle::{index_to_word, parse_word, Alphabet, Word};
use padic_mzv::verify::Suite;
use padic_mzv::{Error, Result};

pub const MAX_N: u32 = 64;
pub const MAX_W: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "padic-mzv", version, about = "p-adic multiple zeta values and polylogarithms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON result to PATH instead of stdout.
    #[arg(long = "json-out", global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The p-adic multiple zeta value of a word or multi-index.
    Pmzv {
        #[command(flatten)]
        num: Numeric,
        #[command(flatten)]
        word: WordArg,
    },
    /// A multiple polylogarithm at a point of the residue disc of 0.
    Polylog {
        #[command(flatten)]
        num: Numeric,
        #[command(flatten)]
        word: WordArg,
        /// The point, as a rational a/b.
        #[arg(long)]
        z: String,
    },
    /// An iterated integral between two basepoints.
    Iterint {
        #[command(flatten)]
        num: Numeric,
        #[command(flatten)]
        word: WordArg,
        /// tan0 (tangent 1 at 0), tan1 (tangent -1 at 1) or a rational.
        #[arg(long, default_value = "tan0")]
        from: String,
        #[arg(long, default_value = "tan1")]
        to: String,
    },
    /// The shuffle product of two words.
    Shuffle {
        #[arg(long, default_value = "")]
        u: String,
        #[arg(long, default_value = "")]
        v: String,
        /// Letter ids.
        #[arg(long, default_value = "01")]
        alphabet: String,
    },
    /// Runs invariant suites.
    Verify {
        #[command(flatten)]
        num: Numeric,
        /// shuffle, grouplike, theorem, torsor, oracle, precision or all.
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Numeric {
    #[arg(long = "p", default_value_t = DEFAULT_P)]
    pub p: u64,
    /// Absolute precision of emitted values.
    #[arg(long = "N", default_value_t = DEFAULT_N)]
    pub n: u32,
    /// Weight cap.
    #[arg(long = "W")]
    pub w: Option<usize>,
    /// Series truncation order, or "auto".
    #[arg(long = "D", default_value = "auto")]
    pub d: String,
}

#[derive(Args, Debug, Clone)]
pub struct WordArg {
    /// Word over the letters 0 and 1.
    #[arg(long, conflicts_with = "index")]
    pub word: Option<String>,
    /// Comma-separated multi-index, e.g. 2,1.
    #[arg(long)]
    pub index: Option<String>,
}

/// Validated numeric configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u64,
    pub n: u32,
    pub w: usize,
    pub d: Option<usize>,
}

impl Numeric {
    /// `w_default` applies when `--W` is absent; a word longer than that
    /// raises the cap to its weight.
    pub fn resolve(&self, w_default: usize) -> Result<RunConfig> {
        padic_mzv::padic::check_prime(self.p)?;
        if self.n == 0 || self.n > MAX_N {
            return Err(Error::Config(format!("N must be in 1..={MAX_N} (got {})", self.n)));
        }
        let w = self.w.unwrap_or(w_default);
        if w > MAX_W {
            return Err(Error::Config(format!("W must be at most {MAX_W} (got {w})")));
        }
        let d = match self.d.as_str() {
            "auto" => None,
            s => Some(
                s.parse::<usize>()
                    .map_err(|_| Error::Config(format!("D must be a positive integer or \"auto\" (got {s})")))?,
            ),
        };
        Ok(RunConfig { p: self.p, n: self.n, w, d })
    }
}

impl WordArg {
    pub fn resolve(&self) -> Result<Word> {
        match (&self.word, &self.index) {
            (Some(s), None) => parse_word(s, &Alphabet::binary()),
            (None, Some(s)) => {
                let index = s
                    .split(',')
                    .map(|k| {
                        k.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::InvalidIndex(format!("\"{k}\" is not a positive integer")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                index_to_word(&index, true)
            }
            _ => Err(Error::Config("give exactly one of --word or --index".into())),
        }
    }
}

pub fn parse_suites(names: &[String]) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for name in names {
        for part in name.split(',') {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(Suite::parse(part)?);
            }
        }
    }
    out.dedup();
    Ok(out)
}
