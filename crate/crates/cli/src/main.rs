//! Batch experiment driver for the cgsieve library.
//!
//! Every run is reproducible: all randomness flows from `--seed` through
//! labeled ChaCha streams, outputs are byte-identical for identical resolved
//! configurations at any `--threads` value, and `--manifest` writes the
//! resolved configuration next to the output file.
//!
//! Exit codes: 0 success, 2 usage, 3 capability (size limits), 4 data
//! (malformed input files).

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod config;

use cgsieve::Error as CoreError;

#[derive(Parser, Debug, Serialize)]
#[command(name = "cgsieve", version, about = "Character sieve experiments over symmetric, dihedral and wreath-product groups")]
pub struct Cli {
    /// Master seed; every random stream derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (0 = library default). Outputs do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Write the resolved run configuration to <out>.manifest.json.
    #[arg(long, global = true, default_value_t = false)]
    pub manifest: bool,

    /// Output format where a choice exists.
    #[arg(long, global = true, default_value = "json")]
    pub format: String,

    /// Numeric mode for probability outputs.
    #[arg(long, global = true, default_value = "exact")]
    pub precision: String,

    /// Optional JSON config file mirroring long flags; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Exact character table of S_n.
    Chartable(ChartableArgs),
    /// Probability distributions over irrep labels.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Wreath-product irrep inventories and tensor distributions.
    #[command(subcommand)]
    Wreath(WreathCommand),
    /// Sieve simulation, exact transcript probabilities and audits.
    #[command(subcommand)]
    Sieve(SieveCommand),
    /// Finite-n trend scans.
    #[command(subcommand)]
    Trends(TrendsCommand),
    /// Smoothness sum of one irrep of S_n.
    Smoothness(SmoothnessArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ChartableArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum DistCommand {
    /// Plancherel distribution of S_n.
    Plancherel {
        #[arg(long)]
        n: u32,
    },
    /// Natural distribution in λ ⊗ μ over S_n.
    Natural {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
    /// Weak Fourier sampling of the coset state of H = {1, m}.
    Coset {
        /// Group descriptor: sym:n, dih:n or wreath:sym:n.
        #[arg(long)]
        group: String,
        /// Involution: id, reflection:K, flip:K, perm:2,1,3 or elem:K.
        #[arg(long, default_value = "canonical")]
        involution: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum WreathCommand {
    /// All irreps of base ≀ Z₂ with dimensions.
    Irreps {
        #[arg(long)]
        base: String,
    },
    /// Plancherel distribution of base ≀ Z₂.
    Plancherel {
        #[arg(long)]
        base: String,
    },
    /// Natural distribution in σ₁ ⊗ σ₂ over base ≀ Z₂.
    Natural {
        #[arg(long)]
        base: String,
        #[arg(long)]
        sigma1: String,
        #[arg(long)]
        sigma2: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum SieveCommand {
    /// Monte-Carlo transcript statistics in the trivial case.
    Run {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        leaves: usize,
        #[arg(long, default_value = "random-pair")]
        strategy: String,
        #[arg(long, default_value_t = 1000)]
        runs: u64,
    },
    /// Exact probability of a labeled forest file under both cases.
    Exact {
        #[arg(long)]
        group: String,
        /// Forest JSON file.
        #[arg(long)]
        forest: PathBuf,
        /// Involution for the order-two case (default: canonical).
        #[arg(long, default_value = "canonical")]
        involution: String,
    },
    /// Inhomogeneity equality audit plus the distinguishing bound.
    Audit {
        /// Wreath base descriptor, e.g. sym:3.
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
    /// Missing-harmonic control in the dihedral group.
    DihedralDemo {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        runs: u64,
    },
    /// Homogeneous-label hit experiment over S_n ≀ Z₂.
    Hit {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        leaves: usize,
        #[arg(long, default_value = "random-pair")]
        strategy: String,
        #[arg(long, default_value_t = 10_000)]
        runs: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum TrendsCommand {
    /// Maximal irrep dimension of S_n.
    Maxdim {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
    },
    /// Plancherel-sampled atypicality fractions.
    Typicality {
        /// Comma-separated grid of n values.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 3.0)]
        d_param: f64,
    },
    /// Exact partition counts against e^{δ√n}.
    Partitions {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
    },
    /// Max smoothness sum over typical irreps.
    Smoothness {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 3.0)]
        d_param: f64,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct SmoothnessArgs {
    #[arg(long)]
    pub n: u32,
    /// Partition string, e.g. "2,1". Omit for all irreps of S_n.
    #[arg(long)]
    pub lambda: Option<String>,
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::CapabilityExceeded(_) => 3,
        CoreError::BadInput { .. } | CoreError::Json(_) | CoreError::Io(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let argv = config::argv_with_config();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; map everything to usage except
            // explicit help/version requests.
            e.print().expect("stderr");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(2),
            };
        }
    };
    if cli.threads > 0 {
        // Ignore failure when a pool already exists (tests call main twice).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
