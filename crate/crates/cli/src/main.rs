//! `omega`: command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INPUT: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "omega", version, about = "Finite Omega-algebras: primeness, monoliths, varieties, criticality")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the full report as JSON to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Cap on relatively-free coordinates.
    #[arg(long, global = true, value_name = "N")]
    pub max_coords: Option<u64>,
    /// Cap on enumerated subalgebras (and so sections).
    #[arg(long, global = true, value_name = "N")]
    pub max_sections: Option<usize>,
    /// Extra variables for the bounded ideal-product cross-check.
    #[arg(long, global = true, value_name = "N")]
    pub max_product_vars: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Seed for coordinate sampling.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub seed: u64,
}

/// `FILE` or `FILE:NAME`; without a name the first algebra is used.
#[derive(Debug, Clone)]
pub struct AlgRef {
    pub path: PathBuf,
    pub name: Option<String>,
}

impl std::str::FromStr for AlgRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.rsplit_once(':') {
            Some((p, n)) if !n.is_empty() && !n.contains('/') && !p.is_empty() => {
                Ok(AlgRef { path: p.into(), name: Some(n.into()) })
            }
            _ => Ok(AlgRef { path: s.into(), name: None }),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// Base ring, e.g. Z/2 or GF(2, u^2+u+1).
    #[arg(long)]
    pub ring: String,
    /// Module shape: comma-separated orders.
    #[arg(long, value_delimiter = ',')]
    pub shape: Vec<u32>,
    /// Signature, e.g. "mul:2".
    #[arg(long, default_value = "mul:2")]
    pub sig: String,
    /// List every raw table instead of one per isomorphism class.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Cap on the raw table count.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_raw: u128,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide primeness by three equivalent tests.
    Prime { alg: AlgRef },
    /// Decide semiprimeness.
    Semiprime { alg: AlgRef },
    /// Decide simplicity.
    Simple { alg: AlgRef },
    /// Compute the monolith (exit 1 when it is zero).
    Monolith { alg: AlgRef },
    /// Compute the annihilator of the ideal generated by the given elements.
    Annihilator {
        alg: AlgRef,
        /// Generators, e.g. "x, y + z"; default the whole algebra.
        #[arg(long)]
        of: Option<String>,
    },
    /// List all ideals.
    Ideals { alg: AlgRef },
    /// List sections up to isomorphism.
    Sections {
        alg: AlgRef,
        #[arg(long)]
        proper: bool,
    },
    /// Decide criticality.
    Critical { alg: AlgRef },
    /// Build the relatively free algebra on N generators.
    Free {
        alg: AlgRef,
        #[arg(long, default_value_t = 2)]
        gens: usize,
    },
    /// Decide whether B lies in the variety generated by the family.
    Member {
        b: AlgRef,
        #[arg(required = true)]
        family: Vec<AlgRef>,
    },
    /// Decide whether two algebras satisfy the same identities.
    IdEqual { a: AlgRef, b: AlgRef },
    /// Search for an isomorphism.
    Iso { a: AlgRef, b: AlgRef },
    /// Decide similarity of two ideals (default: the monoliths).
    Similar {
        a: AlgRef,
        b: AlgRef,
        #[arg(long)]
        ideal_a: Option<String>,
        #[arg(long)]
        ideal_b: Option<String>,
    },
    /// Find a minimal representation over the critical sections of a pool.
    Minrep {
        alg: AlgRef,
        /// Pool algebras (default: the algebra itself).
        pool: Vec<AlgRef>,
    },
    /// Enumerate algebras on a fixed module.
    Enumerate {
        #[command(flatten)]
        job: JobArgs,
        /// Predicates to classify: prime, semiprime, simple, monolithic, critical.
        #[arg(long, value_delimiter = ',')]
        classify: Vec<String>,
    },
    /// Run the built-in verification suite.
    VerifyPaper,
    /// Check primes of an enumeration: critical, tests agree, identities differ.
    VerifyMainPrime {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Evaluate the `expect` directives of a file.
    Check { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    ExitCode::from(commands::run(&cli))
}
