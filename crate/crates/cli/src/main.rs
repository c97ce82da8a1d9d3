//! `slope`: penalty calibration from the command line.
//!
//! Exit status: 0 on success, 1 on any error, 2 when `calibrate` finds that
//! the two minimal-penalty estimates select different models.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "slope",
    version,
    about = "Slope-heuristics penalty calibration for regressograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Calibrate the penalty on a `x,y` CSV and print the report as JSON.
    Calibrate(CalibrateArgs),
    /// Export the regularization path `K -> m(K)` as CSV.
    Path(ScoreArgs),
    /// Run the Monte-Carlo oracle benchmark on simulated data.
    Benchmark(BenchmarkArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Dimension,
    Plugin,
}

/// How the model scores are obtained.
#[derive(Args, Debug)]
struct ScoreArgs {
    /// CSV file with header `x,y` and `x` in [0, 1].
    #[arg(required_unless_present = "scores_file", conflicts_with = "scores_file")]
    input: Option<PathBuf>,
    /// Precomputed scores: CSV with columns `model_id,f,g,dim` (extra columns ignored).
    #[arg(long)]
    scores_file: Option<PathBuf>,
    /// Dimensions of the regular partitions, e.g. `1..37` or `1,2,4,8`.
    /// Defaults to 1..floor(n / ln n).
    #[arg(long)]
    dims: Option<String>,
    /// Penalty shape.
    #[arg(long, value_enum, default_value_t = ShapeArg::Dimension)]
    shape: ShapeArg,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[command(flatten)]
    scores: ScoreArgs,
    /// Dimension threshold; defaults to round(n / (2 ln n)). Required with --scores-file.
    #[arg(long)]
    d_thresh: Option<usize>,
    /// Dimension window `MIN..MAX` for the slope-regression estimate.
    #[arg(long)]
    slope_window: Option<String>,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Dimension threshold; defaults to round(n / (2 ln n)).
    #[arg(long)]
    d_thresh: Option<usize>,
    /// Dimensions of the regular partitions; defaults to 1..floor(n / ln n).
    #[arg(long)]
    dims: Option<String>,
    /// `fig1` (sin(pi x), sigma = 1, uniform design) or a JSON truth file.
    #[arg(long, default_value = "fig1")]
    truth: String,
    /// Directory receiving `summary.json` and `replicates.csv`; the summary
    /// goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Calibrate(args) => commands::calibrate(&args),
        Command::Path(args) => commands::path(&args).map(|()| ExitCode::SUCCESS),
        Command::Benchmark(args) => commands::benchmark(&args).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
