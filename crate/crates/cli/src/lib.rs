//! Command implementations behind the `tso` binary.
//!
//! Every command renders its output to a `String` so it can be compared byte for byte
//! in tests; the binary only decides where that text goes.

pub mod bench;
pub mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use bench::{run_bench, BenchRecord, Suite};
pub use commands::{exit_code, run};

#[derive(Debug, Parser)]
#[command(name = "tso", version, about = "Plan robot teams on graphs with risky edges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Plan a team greedily and certify it against upper bounds.
    Solve(SolveArgs),
    /// Run a benchmark suite and write CSV.
    Bench(BenchArgs),
    /// Estimate a plan's value by Monte-Carlo sampling.
    Simulate(SimulateArgs),
    /// Optimal team by exhaustive search (small instances only).
    Exact(ExactArgs),
    /// Per-node reachability under the survival threshold.
    Feasible(FeasibleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Hex,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Named instance instead of a random graph.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Number of nodes of a random graph.
    #[arg(long, short = 'n', default_value_t = 20)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0.3)]
    pub weight_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub weight_max: f64,
    #[arg(long = "p-s", default_value_t = 0.7)]
    pub p_s: f64,
    /// Keep each ordered pair with this probability instead of building a complete graph.
    #[arg(long)]
    pub density: Option<f64>,
    /// Make the start node the terminal as well (random graphs only).
    #[arg(long)]
    pub depot: bool,
    #[arg(long, default_value_t = 1)]
    pub team: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Exact,
    Heuristic,
}

impl OracleArg {
    pub fn name(self) -> &'static str {
        match self {
            OracleArg::Exact => "exact",
            OracleArg::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Node,
    Edge,
    MultiVisit,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleArg::Exact)]
    pub oracle: OracleArg,
    /// Team size; defaults to the instance's `team_size`.
    #[arg(long)]
    pub team: Option<usize>,
    /// Larger team used for the oversized-team bound.
    #[arg(long)]
    pub oversize: Option<usize>,
    #[arg(long, value_enum, default_value_t = VariantArg::Node)]
    pub variant: VariantArg,
    /// Restarts per heuristic oracle call.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, value_enum, default_value_t = OracleArg::Exact)]
    pub oracle: OracleArg,
    /// Random instances per threshold (ratio suite).
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write 0 in the `ms` column so that output is reproducible.
    #[arg(long)]
    pub omit_timing: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    pub instance: PathBuf,
    /// Plan file written by `solve` or `exact`.
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub team: Option<usize>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FeasibleArgs {
    pub instance: PathBuf,
    /// Compare every verdict against exhaustive path enumeration.
    #[arg(long)]
    pub brute_force: bool,
}

/// Formats `x` with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(1.9539), "1.95390000");
        assert_eq!(sig9(0.550671035882778), "0.550671036");
        assert_eq!(sig9(123456789.4), "123456789");
        assert_eq!(sig9(0.0), "0");
    }

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from(["tso", "solve", "x.json", "--team", "2", "--oversize", "20"]).unwrap();
        match cli.command {
            Command::Solve(a) => {
                assert_eq!(a.team, Some(2));
                assert_eq!(a.oversize, Some(20));
                assert_eq!(a.oracle, OracleArg::Exact);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["tso", "bench", "--suite", "nope"]).is_err());
    }
}
