//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "relaycap", version, about = "Capacity bounds for noncausal relay channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute capacity bounds and write a CSV report.
    Bounds(BoundsArgs),
    /// Simulate the GP decode-forward scheme over a grid of blocklengths and rates.
    Simulate(SimulateArgs),
    /// Recompute the headline numbers of the two worked examples.
    VerifyExamples(VerifyArgs),
    /// Print a random channel file (test helper).
    RandomChannel(RandomChannelArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    pub card_u: usize,
    #[arg(long, default_value_t = 2)]
    pub card_v: usize,
    #[arg(long, default_value_t = 2)]
    pub card_yhat: usize,
    /// Coarse grid resolution.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    #[arg(long, default_value_t = 400)]
    pub refine_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 65536)]
    pub map_cap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// Comma-separated bound names; all applicable bounds when omitted.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<String>>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub witness_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// GP-DF witness file.
    #[arg(
        long,
        conflicts_with = "witness_from_bound",
        required_unless_present = "witness_from_bound"
    )]
    pub witness: Option<PathBuf>,
    /// Maximize the GP-DF bound first and simulate its witness.
    #[arg(long)]
    pub witness_from_bound: bool,
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub rate: Vec<f64>,
    #[arg(long, default_value_t = 0.7)]
    pub rtilde: f64,
    #[arg(long, default_value_t = 0.2)]
    pub eps_relay: f64,
    #[arg(long, default_value_t = 0.3)]
    pub eps_dec: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1e-3, hide = true)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RandomChannelArgs {
    /// |X1|,|X2|,|Y2|,|Y3|
    #[arg(long, value_delimiter = ',', default_values_t = [2, 2, 2, 2])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Make the direct channel ignore x1.
    #[arg(long)]
    pub degraded: bool,
}
