//! `gossipsim` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gossipsim_core::{GraphMode, InitiatorPolicy, Protocol};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "gossipsim",
    version,
    about = "Rumor-spreading simulator for scale-free networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a Barabási–Albert graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Run one dissemination and emit its per-round metrics.
    Run(RunArgs),
    /// Sweep the transition round of an FPTP protocol.
    Sweep(SweepArgs),
    /// Compare push, pull, FPTP and adaptive FPTP across network sizes.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphModeArg {
    Regenerate,
    Fixed,
}

impl From<GraphModeArg> for GraphMode {
    fn from(m: GraphModeArg) -> Self {
        match m {
            GraphModeArg::Regenerate => GraphMode::RegeneratePerRun,
            GraphModeArg::Fixed => GraphMode::FixedGraph,
        }
    }
}

#[derive(Debug, Args)]
struct SeedArg {
    /// RNG seed.
    #[arg(long, env = "GOSSIPSIM_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BaArgs {
    /// Edges attached per new node [default: 2, reduced for tiny graphs].
    #[arg(long)]
    m: Option<usize>,
    /// Size of the complete seed core [default: m + 1].
    #[arg(long)]
    m0: Option<usize>,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Node count.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    ba: BaArgs,
    #[command(flatten)]
    seed: SeedArg,
    /// Edge-list file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Load the topology from an edge-list file instead of generating one.
    #[arg(long, conflicts_with_all = ["n", "m", "m0"])]
    graph: Option<PathBuf>,
    /// Node count of the generated graph.
    #[arg(long, required_unless_present = "graph")]
    n: Option<usize>,
    #[command(flatten)]
    ba: BaArgs,
    #[arg(long)]
    protocol: Protocol,
    /// Transition round for fptp / adaptive-fptp [default: round(log2 N)].
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    tr: Option<u32>,
    /// min-degree | max-degree | random | node:<id> | degree:<k>
    #[arg(long, default_value = "min-degree")]
    initiator: InitiatorPolicy,
    /// Round cap [default: 10 N].
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_rounds: Option<u32>,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Runs averaged per data point.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[arg(long, default_value = "min-degree")]
    initiator: InitiatorPolicy,
    #[arg(long, value_enum, default_value_t = GraphModeArg::Regenerate)]
    graph_mode: GraphModeArg,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    ba: BaArgs,
    /// fptp or adaptive-fptp.
    #[arg(long, default_value = "adaptive-fptp")]
    protocol: Protocol,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    tr_min: u32,
    /// [default: 2 round(log2 N)]
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    tr_max: Option<u32>,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[command(flatten)]
    ba: BaArgs,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Anything that went wrong after the arguments were accepted.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Run(args) => commands::run(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Table(args) => commands::table(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gossipsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
