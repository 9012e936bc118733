use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "overlapdim", version, about = "Dimensions of the overlapping IFS {ax, bx, cx + 1 - c}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of the self-similar measure from the entropy formula.
    DimMeasure(DimMeasureArgs),
    /// Moran-equation dimension of the attractor.
    DimAttractor(DimAttractorArgs),
    /// Certify forward separation of the system.
    CheckSeparation(CheckSeparationArgs),
    /// Evaluate dimensions over a grid of alpha values and write CSV.
    Sweep(SweepArgs),
    /// The overlap correction series, summed or sampled.
    Phi(PhiArgs),
    /// Estimate the local dimension from samples of the measure.
    Estimate(EstimateArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ProbArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p2: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p3: f64,
}

#[derive(Debug, Args)]
pub struct DimMeasureArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub probs: ProbArgs,
    /// Bound on the truncation error of the series.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    S0,
    S1,
    Shat,
}

#[derive(Debug, Args)]
pub struct DimAttractorArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum)]
    pub which: Which,
    /// Subsystem level, required with `--which shat`.
    #[arg(long, required_if_eq("which", "shat"))]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckSeparationArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Refinement levels per candidate pair.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Pairs with min(m, n) up to this value are checked.
    #[arg(long, default_value_t = 20)]
    pub max_exponent: u64,
    /// Include the cover intervals of every checked pair.
    #[arg(long)]
    pub emit_certificate: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha_min: f64,
    #[arg(long)]
    pub alpha_max: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Probabilities for the measure column (uniform when omitted).
    #[arg(long, requires_all = ["p2", "p3"])]
    pub p1: Option<f64>,
    #[arg(long, requires_all = ["p1", "p3"])]
    pub p2: Option<f64>,
    #[arg(long, requires_all = ["p1", "p2"])]
    pub p3: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Separation horizon, also the largest m and n listed in `in_dmn_band`.
    #[arg(long, default_value_t = 20)]
    pub max_exponent: u64,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    #[command(flatten)]
    pub probs: ProbArgs,
    /// Sum the series (default).
    #[arg(long, conflicts_with = "oracle")]
    pub series: bool,
    /// Monte Carlo estimate.
    #[arg(long, requires = "samples")]
    pub oracle: bool,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub probs: ProbArgs,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 50)]
    pub probes: usize,
    /// Strictly decreasing comma list; five geometric radii from 1e-2 to 1e-4 by default.
    #[arg(long)]
    pub radii: Option<String>,
    /// Word length of each sample; chosen from the smallest radius by default.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include probe points and per-probe slopes.
    #[arg(long)]
    pub verbose: bool,
}
