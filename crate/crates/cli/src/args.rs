use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Cross-dimensional matrix algebra, simulation and analysis.
///
/// Exit codes: 0 success, 2 shape or dimension error, 3 unreadable or
/// malformed input, 4 numerical failure, 5 unsupported request, 64 usage.
/// STP_TOL overrides the equivalence tolerance (default 1e-9).
#[derive(Debug, Parser)]
#[command(name = "stp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one algebra operation on JSON operands
    Algebra {
        #[arg(value_enum)]
        op: AlgebraOp,
        /// Operand files (one for norm and reduce, two otherwise)
        #[arg(required = true, num_args = 1..=2)]
        operands: Vec<PathBuf>,
    },
    /// Simulate a system and write its trajectory as CSV
    Simulate(SimulateArgs),
    /// Report structural properties of a system as JSON
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraOp {
    /// M-product of two matrices
    Mprod,
    /// V-product of a matrix and a vector
    Vprod,
    /// M-addition of two matrices in one shape class
    Madd,
    /// V-addition of two vectors
    Vadd,
    /// V-norm of a vector or operator norm of a matrix
    Norm,
    /// V-distance between two vectors
    Dist,
    /// Smallest representative of a vector or matrix class
    Reduce,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// System file
    pub system: PathBuf,
    /// Initial state file
    pub x0: PathBuf,
    /// Number of discrete steps
    #[arg(long, conflicts_with = "times")]
    pub steps: Option<usize>,
    /// Comma-separated evaluation times for continuous systems
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub times: Option<Vec<f64>>,
    /// Piecewise-constant input signal file
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Evaluate the continuous solution by a series truncated at this order
    #[arg(long, value_name = "ORDER")]
    pub truncated: Option<usize>,
    /// Largest state dimension a simulation may reach
    #[arg(long, default_value_t = stp_core::dynamics::DEFAULT_MAX_STATE_DIM)]
    pub max_dim: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// System file
    pub system: PathBuf,
    /// Dimension of the initial state space
    #[arg(long)]
    pub r0: Option<usize>,
    #[command(subcommand)]
    pub report: Report,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Report {
    /// Dimension sequence r_0, r_1, ... up to the invariant space
    Profile,
    /// Whether r0 is an invariant dimension
    Invariant,
    /// Controllability of the stationary realization
    Controllable,
    /// Observability of the stationary realization
    Observable,
    /// Reachable subspace of the k-th transient layer
    ReachableLayer { k: usize },
    /// Projective stationary realization on V_r
    Projective { r: usize },
}
