mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

/// Matroidal networks and scalar-linear network codes.
///
/// Exit status: 0 when the operation's verification succeeds, 1 when it
/// fails, 2 on unreadable or invalid input, 3 when a cap is exceeded.
/// Failures are reported as one JSON object on stderr.
#[derive(Debug, Parser)]
#[command(name = "matnet", version)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Largest ground set for circuit, base and axiom enumeration.
    #[arg(long, global = true, env = "MATNET_ENUM_CAP")]
    pub enum_cap: Option<usize>,
    /// Largest number of candidates visited by `search` or assignments run by `simulate --all`.
    #[arg(long, global = true, env = "MATNET_SEARCH_CAP")]
    pub search_cap: Option<u64>,
    /// Progress notes on stderr; repeat for more.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matroid inspection.
    #[command(subcommand)]
    Matroid(MatroidCommand),
    /// Build a matroidal network from a matroid.
    Construct(ConstructArgs),
    /// Solve a matroidal network from a representation of its matroid.
    Solve(SolveArgs),
    /// Build and solve the network of the uniform matroid U(c,d).
    SolveUniform(SolveUniformArgs),
    /// Build and solve the network of a graphic matroid.
    SolveGraphic(SolveGraphicArgs),
    /// Read a representable matroid off a solution.
    Extract(ExtractArgs),
    /// Check matroidal conditions and/or a code.
    Verify(VerifyArgs),
    /// Run a code on message assignments.
    Simulate(SimulateArgs),
    /// Exhaustive search for a scalar-linear solution.
    Search(SearchArgs),
    /// Graphviz rendering of a network.
    ExportDot(ExportDotArgs),
}

#[derive(Debug, Subcommand)]
pub enum MatroidCommand {
    /// Axioms, rank, circuits and bases.
    Check {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub matroid: PathBuf,
    /// Construction settings (base, receiver policies, repeats, caps, alphabet size).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the config's alphabet size.
    #[arg(long)]
    pub alphabet: Option<u64>,
    /// Overrides the config's starting base, e.g. `0,2`.
    #[arg(long, value_delimiter = ',')]
    pub base: Option<Vec<usize>>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Network document with its mapping `f`.
    #[arg(long)]
    pub network: PathBuf,
    /// Representation matrix.
    #[arg(long, conflicts_with = "matroid", required_unless_present = "matroid")]
    pub matrix: Option<PathBuf>,
    /// Matroid whose standard representation to use (vector, graphic or uniform).
    #[arg(long)]
    pub matroid: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveUniformArgs {
    #[arg(long)]
    pub c: usize,
    #[arg(long)]
    pub d: usize,
    /// Field characteristic.
    #[arg(long = "char", default_value_t = 2)]
    pub characteristic: u32,
    #[arg(long, default_value_t = 2)]
    pub alphabet: u64,
    #[arg(long)]
    pub network_out: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveGraphicArgs {
    /// Graph as `{"vertices": n, "edges": [[u, v], ...]}`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub alphabet: u64,
    #[arg(long)]
    pub network_out: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub code: PathBuf,
    /// Where to write the extracted matrix.
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the network with the extracted mapping.
    #[arg(long)]
    pub network_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long, required_unless_present_any = ["matroid", "matrix"])]
    pub code: Option<PathBuf>,
    /// Check the matroidal conditions against this matroid.
    #[arg(long, conflicts_with = "matrix")]
    pub matroid: Option<PathBuf>,
    /// Check the matroidal conditions against the vector matroid of this matrix.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub code: PathBuf,
    /// Message values in message order, e.g. `1,0`.
    #[arg(long, value_delimiter = ',', conflicts_with = "all", required_unless_present = "all")]
    pub assignment: Option<Vec<u64>>,
    /// Every assignment.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Field name `p^l`.
    #[arg(long)]
    pub field: String,
    /// Overrides the search cap for this run.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportDotArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Written to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.diagnostic());
            ExitCode::from(f.exit_code())
        }
    }
}
