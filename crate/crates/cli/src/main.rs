//! sriplab: build incoherent dictionaries over F_p from the command line and
//! probe the spectral statistics of their random subdictionaries.

mod commands;
mod dict_spec;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sriplab_core::{SamplingPolicy, DEFAULT_ENUM_BUDGET};

use dict_spec::DictArgs;

#[derive(Parser)]
#[command(
    name = "sriplab",
    version,
    about = "Incoherent dictionaries over F_p and the spectra of their random subdictionaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a dictionary, report its shape and coherence, optionally save it.
    Dict(DictCmd),
    /// Exhaustive coherence scan of a dictionary.
    Coherence(CoherenceCmd),
    /// Monte Carlo scan of the Gram deviation tail over random supports.
    Srip(SripCmd),
    /// Pooled spectrum of the normalized Gram error, with a histogram figure.
    Spectrum(SpectrumCmd),
    /// Tail-probability decay fit across a family of primes.
    Decay(DecayCmd),
    /// Sparse recovery demo via orthogonal matching pursuit.
    Recover(RecoverCmd),
    /// Exhaustive worst-case Gram deviation over all supports up to a size.
    RipExact(RipExactCmd),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Policy {
    /// Supports drawn uniformly over all atoms.
    Uniform,
    /// No two atoms of a support share a basis.
    DistinctBases,
}

impl Policy {
    fn name(self) -> &'static str {
        match self {
            Policy::Uniform => "uniform",
            Policy::DistinctBases => "distinct-bases",
        }
    }
}

impl From<Policy> for SamplingPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Uniform => SamplingPolicy::UniformOverAtoms,
            Policy::DistinctBases => SamplingPolicy::DistinctBases,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    /// Delta basis plus all p chirp bases at each prime.
    Heisenberg,
    /// One random orthonormal basis at each prime (null model).
    SingleBasis,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Heisenberg => "heisenberg",
            Family::SingleBasis => "single-basis",
        }
    }
}

#[derive(Args)]
struct DictCmd {
    #[command(flatten)]
    dict: DictArgs,
    /// Save the dictionary to this path.
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    /// Skip the coherence scan when the atom-pair count exceeds this cap.
    #[arg(long, default_value_t = 20_000_000, value_name = "N")]
    max_pairs: u64,
}

#[derive(Args)]
struct CoherenceCmd {
    #[command(flatten)]
    dict: DictArgs,
    /// Write a one-row summary to this path.
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Refuse the scan when the atom-pair count exceeds this cap.
    #[arg(long, default_value_t = 20_000_000, value_name = "N")]
    max_pairs: u64,
}

#[derive(Args)]
struct SripCmd {
    #[command(flatten)]
    dict: DictArgs,
    /// Sub-critical size rule: n = round(p^(1-epsilon)), epsilon in (0, 1).
    #[arg(long, value_name = "F", conflicts_with = "alpha")]
    epsilon: Option<f64>,
    /// Critical size rule: n = round(alpha*p); requires --threshold.
    #[arg(long, value_name = "F")]
    alpha: Option<f64>,
    /// Deviation threshold override (default p^(-epsilon/2)).
    #[arg(long, value_name = "F")]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 100, value_name = "N")]
    trials: u64,
    #[arg(long, default_value_t = 1, value_name = "SEED")]
    master_seed: u64,
    #[arg(long, value_enum, default_value_t = Policy::Uniform)]
    policy: Policy,
    /// Write per-trial rows and a summary to this path.
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SpectrumCmd {
    #[command(flatten)]
    dict: DictArgs,
    /// Explicit support size n.
    #[arg(long, value_name = "N", conflicts_with_all = ["epsilon", "alpha"])]
    size: Option<usize>,
    /// Derive n = round(p^(1-epsilon)).
    #[arg(long, value_name = "F", conflicts_with = "alpha")]
    epsilon: Option<f64>,
    /// Derive n = round(alpha*p).
    #[arg(long, value_name = "F")]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 100, value_name = "N")]
    trials: u64,
    #[arg(long, default_value_t = 1, value_name = "SEED")]
    master_seed: u64,
    #[arg(long, value_enum, default_value_t = Policy::Uniform)]
    policy: Policy,
    /// Histogram bin count.
    #[arg(long, default_value_t = 60, value_name = "N")]
    bins: usize,
    /// Histogram range.
    #[arg(
        long,
        num_args = 2,
        value_names = ["LO", "HI"],
        allow_negative_numbers = true,
        default_values_t = [-2.5, 2.5]
    )]
    range: Vec<f64>,
    /// Write pooled eigenvalues and a summary to this path.
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the histogram figure to this path.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct DecayCmd {
    /// Comma-separated list of odd primes.
    #[arg(long, value_delimiter = ',', required = true, value_name = "P,P,...")]
    primes: Vec<u64>,
    /// Size rule exponent: n = round(p^(1-epsilon)) at each prime.
    #[arg(long, value_name = "F")]
    epsilon: f64,
    /// Dictionary family evaluated at each prime.
    #[arg(long, value_enum, default_value_t = Family::Heisenberg)]
    family: Family,
    #[arg(long, default_value_t = 100, value_name = "N")]
    trials: u64,
    #[arg(long, default_value_t = 1, value_name = "SEED")]
    master_seed: u64,
    /// Write per-prime rows and the fit to this path.
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct RecoverCmd {
    #[command(flatten)]
    dict: DictArgs,
    /// Sparsity: number of atoms OMP may select (and, in synthetic mode, the
    /// planted support size).
    #[arg(long, default_value_t = 2, value_name = "K")]
    sparsity: usize,
    /// Seed for the planted support and coefficients (synthetic mode).
    #[arg(long, default_value_t = 1, value_name = "SEED")]
    signal_seed: u64,
    /// Sampling policy for the planted support.
    #[arg(long, value_enum, default_value_t = Policy::DistinctBases)]
    policy: Policy,
    /// Read the signal from a file (one re:im per line) instead of planting.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["signal_seed", "policy"])]
    input: Option<PathBuf>,
    /// Residual norm below which OMP stops early.
    #[arg(long, default_value_t = 1e-9, value_name = "F")]
    tol: f64,
    /// Write the JSON report to this path (default: stdout).
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct RipExactCmd {
    #[command(flatten)]
    dict: DictArgs,
    /// Largest support size to enumerate.
    #[arg(long, value_name = "N")]
    n_max: usize,
    /// Cap on the number of enumerated supports.
    #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET, value_name = "N")]
    budget: u64,
    /// Write the JSON report to this path.
    #[arg(long, short = 'o', value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Dict(args) => commands::dict(&args),
        Cmd::Coherence(args) => commands::coherence_scan(&args),
        Cmd::Srip(args) => commands::srip(&args),
        Cmd::Spectrum(args) => commands::spectrum(&args),
        Cmd::Decay(args) => commands::decay(&args),
        Cmd::Recover(args) => commands::recover(&args),
        Cmd::RipExact(args) => commands::rip_exact(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
