//! `freqvqa` command-line front end.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "freqvqa", version, about = "No-reference quality scoring for short-form video")]
struct Cli {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Machine output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the artifact/structure maps of every sampled frame.
    WeightMaps(MapArgs),
    /// Score one video from its frames, feature maps and model bundle.
    Score(ScoreArgs),
    /// Correlate predicted scores with ground truth.
    Eval(EvalArgs),
    /// Time the scoring path over repeated runs.
    Bench(BenchArgs),
    /// List the entries of a model bundle.
    InspectModel(InspectArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Sampling {
    /// Number of sampled frames.
    #[arg(long = "frames", default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub frames: u32,
    /// Temporal window length around each sampled frame.
    #[arg(long = "window", default_value_t = 6, value_parser = clap::value_parser!(u32).range(2..))]
    pub window: u32,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Y4M file or image-sequence glob.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    /// Y4M file or image-sequence glob.
    #[arg(long)]
    pub input: String,
    /// Feature tensor (`.fgt`) of shape [T, C, 14, 14].
    #[arg(long)]
    pub features: PathBuf,
    /// Model bundle (`.fgb`).
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Omit wall-clock timing so output is reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Predictions as `id,score` CSV.
    pub predictions: PathBuf,
    /// Ground truth as `id,score` CSV.
    pub ground_truth: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// One input per resolution; repeat the flag.
    #[arg(long, required = true)]
    pub input: Vec<String>,
    /// Feature tensor shared by all inputs, or one per input.
    #[arg(long, required = true)]
    pub features: Vec<PathBuf>,
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub runs: u32,
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    #[arg(long)]
    pub model: PathBuf,
}

fn run(cli: Cli) -> Result<String, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(usize::from(n))
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::WeightMaps(a) => commands::weight_maps(&a, cli.format.unwrap_or(Format::Json)),
        Command::Score(a) => commands::score(&a, cli.format.unwrap_or(Format::Json)),
        Command::Eval(a) => commands::eval(&a, cli.format.unwrap_or(Format::Json)),
        Command::Bench(a) => commands::bench(&a, cli.format.unwrap_or(Format::Csv)),
        Command::InspectModel(a) => commands::inspect_model(&a, cli.format.unwrap_or(Format::Json)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
