use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ohmlab::linalg::{PNorm, DEFAULT_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "ohmlab",
    version,
    about = "Electrical flow routing lab: competitive ratios, cut diagnostics, vertex sparsification"
)]
pub struct Cli {
    /// Relative residual tolerance for every Laplacian solve
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Base seed; experiments use seeds `seed, seed + 1, ...`
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Largest edge count to generate (default 2000000) or to densify (default 4000)
    #[arg(long, global = true)]
    pub cap_edges: Option<usize>,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Leave out the `# generated ...` comment line
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a graph file
    #[command(subcommand)]
    Gen(GenCommand),
    /// Competitive ratio per p next to the conductance bound
    Report {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_p, default_value = "1,1.5,2,3,4,8,inf")]
        p: Vec<PNorm>,
    },
    /// Threshold-cut dump for one unit edge demand
    Diagnose {
        graph: PathBuf,
        #[arg(long)]
        edge: usize,
        /// Spread thresholds added to the breakpoint midpoints
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Where to write the one-row identity summary; stderr when omitted
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Conductance used in the derivative checks instead of the computed one
        #[arg(long)]
        phi: Option<f64>,
    },
    /// Schur complement, harmonic extension, and cut rounding on a partition
    Sparsify {
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Terminal values in the order of the `C:` line (sorted ids);
        /// random 0/1 values from --seed when omitted
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
        /// Monte Carlo thresholds for the rounding check
        #[arg(long, default_value_t = 4000)]
        samples: usize,
    },
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Connected simple random d-regular graph
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Every edge replaced by k disjoint paths of length k
    Gadget {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Both edge lists on one vertex set (ids are shared, not shifted)
    Union {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,12,16,20")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3,4")]
    pub d: Vec<usize>,
    /// Number of seeds per (n, d), starting at --seed
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// rho_inf against 3 ln(vol) / phi over random regular graphs
    Upperbound(GridArgs),
    /// rho_p against the two interpolation bounds on one graph
    Interpolation {
        /// Graph file; a random regular graph from --n/--d/--seed otherwise
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_p, default_value = "1,1.5,2,3,4,8,inf")]
        p: Vec<PNorm>,
    },
    /// Base graph plus its k-gadget for a range of k
    Lowerbound {
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        k: Vec<usize>,
        /// Finite exponents reported besides rho_inf
        #[arg(long, value_delimiter = ',', value_parser = parse_p, default_value = "1.5,2,4")]
        p: Vec<PNorm>,
    },
    /// Mean per-edge flow length against rho_inf and the conductance bound
    Localization(GridArgs),
}

fn parse_p(s: &str) -> Result<PNorm, String> {
    s.parse().map_err(|e: ohmlab::Error| e.to_string())
}
