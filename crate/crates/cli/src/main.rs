//! `exgpd`: simulate heavy-tailed samples, draw Hill and LV tail-index plots,
//! fit the exGPD, and evaluate log-scale risk measures.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "exgpd",
    version,
    about = "exGPD estimation, risk measures and tail-index plots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a seeded GPD or GEV sample
    Simulate(SimulateArgs),
    /// Hill and LV tail-index paths with SVG and TSV output
    Tail(TailArgs),
    /// Fit the exGPD (or the GPD) by moments or maximum likelihood
    Fit(FitArgs),
    /// VaR, mean excess and CTE on the log scale
    Risk(RiskArgs),
    /// GPD and exGPD density or hazard curves
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gpd,
    Gev,
}

#[derive(Debug, clap::Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "gpd")]
    family: FamilyArg,
    /// Location added to every draw
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    xi: f64,
    #[arg(long, short)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Base name of the sample file (`<name>.txt` plus `<name>.meta.json`)
    #[arg(long, default_value = "sample")]
    name: String,
}

/// Where the data comes from: a file or one of the bundled datasets.
#[derive(Debug, clap::Args)]
struct InputArgs {
    /// Numeric text file (one value per line or delimited columns)
    #[arg(required_unless_present = "dataset", conflicts_with = "dataset")]
    input: Option<PathBuf>,
    /// Use a bundled dataset instead of a file
    #[arg(long, value_enum)]
    dataset: Option<DatasetArg>,
    /// Column to read, by zero-based index or header name
    #[arg(long)]
    column: Option<String>,
    /// Field delimiter; detected from the first data row when omitted
    #[arg(long)]
    delimiter: Option<char>,
    /// Transform applied to every value after loading
    #[arg(long, value_enum, default_value = "none")]
    transform: TransformArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DatasetArg {
    Danish,
    Bmw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformArg {
    None,
    Abs,
    Negate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TailMethod {
    Hill,
    Lv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TailArg {
    Upper,
    Lower,
}

#[derive(Debug, clap::Args)]
struct TailArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "both")]
    method: TailMethod,
    /// `lower` negates the data first so the loss tail becomes the upper tail
    #[arg(long, value_enum, default_value = "upper")]
    tail: TailArg,
    /// Largest k shown in the plot and TSV files [default: min(n, 1000)]
    #[arg(long)]
    max_k: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mme,
    Mle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    /// Treat the values as exGPD data (log scale)
    Exgpd,
    /// Treat the values as GPD data and fit the GPD directly (MLE only)
    Gpd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "mle")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "exgpd")]
    model: ModelArg,
    /// Input is raw GPD data: take logs before an exGPD fit
    #[arg(long)]
    log_transform: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write `fit.json` into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct RiskArgs {
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    xi: f64,
    /// Probability levels, comma separated
    #[arg(long = "levels", value_delimiter = ',', default_value = "0.9,0.95,0.99")]
    levels: Vec<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write `risk.json` into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Curve {
    Pdf,
    Hazard,
}

#[derive(Debug, clap::Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    xi: f64,
    #[arg(long, value_enum, default_value = "pdf")]
    what: Curve,
    /// Left end of the plotted range [default: exGPD 0.1% quantile, capped at 0]
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    /// Right end [default: exGPD upper endpoint or 99.9% quantile]
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Tail(a) => commands::tail(&a),
        Command::Fit(a) => commands::fit(&a),
        Command::Risk(a) => commands::risk(&a),
        Command::Density(a) => commands::density(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
