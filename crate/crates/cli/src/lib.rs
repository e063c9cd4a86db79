//! Command-line front end. [`run`] parses argv, executes one subcommand
//! and returns the process exit code.

pub mod config;
pub mod error;
pub mod output;
pub mod plot;

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, CliResult, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED};

/// Environment variable giving the default worker count.
pub const WORKERS_ENV: &str = "GVDC_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "gvdc", version, about = "Random double circulant codes versus the Gilbert-Varshamov bound")]
pub struct Cli {
    /// Worker threads (default: $GVDC_WORKERS, else all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irreducible factors of Z^n+1 over GF(2)
    Factor {
        #[arg(long)]
        n: usize,
        /// Also build the explicit family for n = p^m and compare
        #[arg(long)]
        kasami: bool,
    },
    /// Kasami primes (or all primes) from a starting point, as CSV
    Primes {
        #[arg(long)]
        from: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// List every prime, not only Kasami primes
        #[arg(long)]
        all: bool,
    },
    /// GV guarantee, simple and main thresholds for length 2n, as CSV
    Thresholds {
        #[arg(long)]
        n: u64,
        /// Main-threshold constant (exact decimal or fraction)
        #[arg(long)]
        b: Option<String>,
    },
    /// Evaluate every numeric constant of the argument
    AuditConstants(ConstArgs),
    /// Draw random defining vectors (trial i uses the same seed as experiment trial i)
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Minimum distance of one double circulant code
    Mindist {
        #[arg(long)]
        n: usize,
        /// Defining vector: 0x-hex, bare hex, or a 0/1 string of length n (position 0 first)
        #[arg(long)]
        a: String,
        #[arg(long, conflicts_with = "search")]
        exact: bool,
        /// Look for a codeword of weight <= W by information-set search
        #[arg(long, value_name = "W")]
        search: Option<usize>,
        /// Information sets tried by the search
        #[arg(long, default_value_t = 500)]
        effort: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weight distribution of a code read from a file (`n=..;g=<hex>` cyclic or `n=..;a=<hex>` double circulant)
    Spectrum {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = gvdc::spectrum::DEFAULT_DIM_LIMIT)]
        dim_limit: usize,
    },
    /// Exact E[X(w)] from the cyclic lattice, optionally against brute force
    Expected {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        bruteforce: bool,
    },
    /// Run lemma audits: all|cx|orbit|expected|simple|triplesum|repetition|distrib|kappa|enumeration|c2series
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Monte Carlo samples for sampled triple-sum checks
        #[arg(long, default_value_t = gvdc::verify::DEFAULT_MC_SAMPLES)]
        samples: u64,
        /// Skip the exhaustive p=13 sweep and the sampled lengths
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        consts: ConstArgs,
    },
    /// Sample or enumerate codes and record their distances
    Experiment(ExperimentArgs),
    /// SVG plot of experiment records
    Plot {
        #[arg(long)]
        records: PathBuf,
        /// histogram | threshold-overlay
        #[arg(long, default_value = "histogram")]
        kind: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ConstArgs {
    /// Config file; only its [constants] table is used here
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a constant, e.g. --set kappa=0.07 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Write the JSON report here
    #[arg(long = "report")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Half-length n (or give --p and --m)
    #[arg(long, conflicts_with = "p")]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, requires = "p")]
    pub m: Option<u32>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// exact | search
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub effort: Option<usize>,
    /// Enumerate all 2^n defining vectors
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub max_trials: Option<u64>,
    /// Count codes with d <= W instead of the default threshold
    #[arg(long, value_name = "W")]
    pub w: Option<u64>,
    /// Overrides constant b
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn worker_count(flag: Option<usize>, config: Option<usize>) -> CliResult<Option<usize>> {
    if let Some(w) = flag.or(config) {
        return Ok(Some(w));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        _ => Ok(None),
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let config_workers = match &cli.command {
        Command::Experiment(a) => config::ExperimentConfig::load_opt(a.config.as_deref())?.workers,
        _ => None,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = worker_count(cli.workers, config_workers)? {
        if w == 0 {
            return Err(CliError::Usage("worker count must be positive".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| commands::dispatch(cli.command))
}

/// Runs one command line and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
