//! `joints-lab`: generate line configurations, count joints, check bounds and
//! run the peeling, choosing, sampling and interpolation procedures.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 input error, 3 genericity
//! failure.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "joints-lab",
    version,
    about = "Exact joints of lines over finite fields and Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Grid,
    Star,
    Multistar,
    Plane,
    Pencil,
    Random,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    /// Field characteristic: a prime, or 0 for Q.
    #[arg(long, default_value_t = 101)]
    pub field: u64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Grid side length, or number of pencil lines.
    #[arg(long)]
    pub m: Option<u64>,
    /// Number of lines for star and random collections.
    #[arg(long)]
    pub lines: Option<usize>,
    #[arg(long)]
    pub centers: Option<usize>,
    #[arg(long)]
    pub per_center: Option<usize>,
    /// Prime for the plane-with-verticals family; defaults to --field.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct InOut {
    /// Line-collection JSON.
    pub input: std::path::PathBuf,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated line collection.
    Gen(GenArgs),
    /// List every joint with its incident lines and multiplicity.
    Joints {
        #[command(flatten)]
        io: InOut,
        /// Largest number of lines through one point whose tuples are counted.
        #[arg(long, default_value_t = joints_core::geometry::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Check |J| against the explicit joint bound and emit a run report.
    Verify {
        #[command(flatten)]
        io: InOut,
        /// Also bound the joints of multiplicity >= lambda.
        #[arg(long)]
        lambda: Option<u64>,
        /// Include wall-clock time (makes the report non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Partition the joints by repeatedly removing the lightest line.
    Peel(InOut),
    /// Assign lines to high-multiplicity joints on a generic collection.
    Choose {
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        lambda: u64,
        /// Skip the genericity check and bound verification.
        #[arg(long)]
        unchecked: bool,
    },
    /// Random line sampling: which high-multiplicity joints survive.
    Sample {
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Per-trial CSV (trial,kept_lines,survivors).
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
    /// Minimal-degree polynomial vanishing on a point set or on the joints of a collection.
    Vanish(InOut),
    /// Slope-block choice on the plane-with-verticals collection over F_p.
    SlopePartition {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn configure_threads() {
    if let Ok(v) = std::env::var("JOINTS_LAB_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("ignoring JOINTS_LAB_THREADS={v:?}: expected a positive integer"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Gen(args) => commands::gen(&args),
        Command::Joints { io, cap } => commands::joints(&io, cap),
        Command::Verify { io, lambda, timing } => commands::verify(&io, lambda, timing),
        Command::Peel(io) => commands::peel(&io),
        Command::Choose {
            io,
            lambda,
            unchecked,
        } => commands::choose(&io, lambda, unchecked),
        Command::Sample {
            io,
            lambda,
            trials,
            seed,
            csv,
        } => commands::sample(&io, lambda, trials, seed, csv.as_deref()),
        Command::Vanish(io) => commands::vanish(&io),
        Command::SlopePartition { p, k, out } => commands::slope_partition(p, k, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("joints-lab: {e}");
            ExitCode::from(e.code())
        }
    }
}
