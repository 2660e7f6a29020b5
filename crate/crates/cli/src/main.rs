//! `unicircle` command-line front end.
//!
//! Exit status: 0 success, 1 a check failed, 2 usage error.

mod commands;
mod config;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unicircle::FamilyId;

use config::{OutputFormat, PartialConfig, RunConfig, PRECISION_ENV};
use input::KRange;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl From<unicircle::Error> for CliError {
    fn from(e: unicircle::Error) -> Self {
        use unicircle::Error as E;
        match e {
            E::InvalidArgument(_)
            | E::Parse(_)
            | E::DegreeConstraint { .. }
            | E::IdentityHypothesis(_)
            | E::ZeroPolynomial => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "unicircle", version, about = "Unimodular zeros of self-inversive polynomials")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Working precision in bits (at least 64)
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<u32>,

    /// Tolerances are 10^-E
    #[arg(long, global = true, value_name = "E")]
    tol_exponent: Option<i32>,

    /// Starting sample count for circle bounds (at least 64)
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Worker threads for per-k work
    #[arg(long, global = true, value_name = "N")]
    parallelism: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// JSON file with RunConfig fields; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All roots of a polynomial read from a JSON file
    Roots {
        /// `{"coeffs": [...]}` in ascending degree order, or `-` for stdin
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the unimodularity criteria on a self-inversive polynomial
    Criteria {
        #[arg(long)]
        input: PathBuf,
        /// Run every criterion (the default)
        #[arg(long, conflicts_with = "only")]
        all: bool,
        /// Comma-separated subset, e.g. cohn,lakatos
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Decomposition certificate for a family polynomial
    Certify {
        #[arg(long)]
        family: FamilyId,
        /// k or an inclusive range a..b
        #[arg(long)]
        k: KRange,
        /// Degree parameter of h_r (family default when omitted)
        #[arg(long)]
        r: Option<usize>,
        /// Separation constant (family default when omitted)
        #[arg(long)]
        c: Option<f64>,
    },
    /// Family polynomials, decompositions and inequality scans
    Families {
        #[command(subcommand)]
        command: FamiliesCommand,
    },
    /// Special values: bernoulli, euler, zeta, zeta-even, eta, eta0, l-chi4
    Special {
        name: commands::SpecialName,
        /// Arguments; integers for bernoulli, euler, zeta-even and l-chi4
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
    },
    /// Check a family on a k range by root finding and by certificate
    VerifyFamily {
        #[arg(long, default_value = "P")]
        family: FamilyId,
        #[arg(long, default_value = "2..100")]
        k: KRange,
    },
}

#[derive(Subcommand, Debug)]
enum FamiliesCommand {
    /// Coefficients of one family member
    Build {
        #[arg(long)]
        family: FamilyId,
        #[arg(long)]
        k: usize,
    },
    /// Split M_k, N_k or V_k into h_r and e_r
    Decompose {
        #[arg(long)]
        family: FamilyId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Zeta-sequence inequalities of family P
    ScanLemma3 {
        #[arg(long, default_value = "1..60")]
        k: KRange,
    },
    /// Eta-sequence inequalities of families Q and W
    ScanLemma5 {
        #[arg(long, default_value = "1..60")]
        k: KRange,
    },
    /// Certified max |e_4| <= 0.019 for family P
    ScanLemma6 {
        #[arg(long, default_value = "11..40")]
        k: KRange,
    },
    /// Residual of the series identity for P_k at a point
    Ramanujan {
        #[arg(long)]
        k: usize,
        /// `re` or `re,im` with positive real part
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z: String,
        /// Terms per series (chosen from the tail bound when omitted)
        #[arg(long)]
        terms: Option<usize>,
    },
}

fn resolve_config(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let flags = PartialConfig {
        precision_bits: global.precision,
        tol_exponent: global.tol_exponent,
        samples: global.samples,
        parallelism: global.parallelism,
        output_format: global.format,
    };
    let file = match &global.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let env = PartialConfig::from_env_value(std::env::var(PRECISION_ENV).ok())?;
    flags.over(file).over(env).resolve()
}

fn run(cli: Cli) -> Result<report::Report, CliError> {
    let cfg = resolve_config(&cli.global)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| CliError::Failure(format!("cannot start worker pool: {e}")))?;
    let report = pool.install(|| commands::dispatch(cli.command, &cfg))?;
    let stdout = std::io::stdout();
    report.write(&cfg, &mut stdout.lock())?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(report) if report.failures.is_empty() => ExitCode::SUCCESS,
        Ok(report) => {
            for f in &report.failures {
                eprintln!("FAIL {f}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `unicircle --help` for usage");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
