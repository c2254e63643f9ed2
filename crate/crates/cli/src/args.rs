use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::angle::{parse_angle, parse_triple};

#[derive(Debug, Parser)]
#[command(
    name = "qgame",
    version,
    about = "Pure-strategy equilibria of entangled two-player games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List equilibria at a single entanglement value.
    Solve,
    /// Sweep a two-player game over the entanglement grid.
    Sweep,
    /// Sweep a mixture of two games over entanglement and prior.
    BayesSweep,
    /// θ scatter, payoff histogram and θ-vs-payoff datasets from a sweep.
    Analyze,
    /// Print the deduplicated strategy grid.
    Strategies,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Sweep => "sweep",
            Self::BayesSweep => "bayes-sweep",
            Self::Analyze => "analyze",
            Self::Strategies => "strategies",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Every flag overrides the matching config key.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// Run configuration file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Game name from the catalogue (player B's first type for bayes-sweep).
    #[arg(long, global = true)]
    pub game: Option<String>,

    /// Second game for bayes-sweep.
    #[arg(long, global = true)]
    pub game2: Option<String>,

    /// Game catalogue; the shipped catalogue is used when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalogue: Option<PathBuf>,

    /// Grid steps for θ, φ, α, e.g. "pi,pi/2,pi/2".
    #[arg(long, global = true, value_name = "T,P,A", value_parser = parse_triple, allow_hyphen_values = true)]
    pub steps: Option<(f64, f64, f64)>,

    /// Entanglement for solve, in [0, pi/2].
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Number of uniform γ points on [0, pi/2].
    #[arg(long, global = true, value_name = "N")]
    pub gamma_grid: Option<usize>,

    /// Number of uniform prior points on [0, 1].
    #[arg(long, global = true, value_name = "N")]
    pub p_grid: Option<usize>,

    /// Best-response tolerance.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,

    /// Output file (a directory for analyze); stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// SVG output (a directory for analyze).
    #[arg(long, global = true, value_name = "PATH")]
    pub plot: Option<PathBuf>,

    /// Worker threads for the parallel sections.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Sweep output (CSV or JSON) for analyze; a sweep is run when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// γ at which analyze builds the payoff histogram.
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub gamma_slice: Option<f64>,

    /// Histogram bin width.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bin_width: Option<f64>,
}
