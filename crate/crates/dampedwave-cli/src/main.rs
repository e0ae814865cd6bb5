use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use dampedwave_cli::{presets, run, write_artifacts, CliError, FormatChoice, Verb};

/// Deterministic experiment runner for the boundary-damped wave equation:
/// spectra, filtered simulations, observability tables, decay-rate tables.
#[derive(Parser)]
#[command(name = "dampedwave-cli", version, about)]
struct Cli {
    #[command(subcommand)]
    verb: VerbArg,

    /// Path to a JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Bundled configuration name (see --help for the list).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Directory artifacts are written into; created if missing.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Write only this machine-readable format (csv or json); SVG output
    /// follows the configuration either way.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand)]
enum VerbArg {
    /// Eigenvalues by every available route, with the filter partition.
    Spectrum,
    /// Time integration with energy history and decay certificate.
    Simulate,
    /// Boundary observability ratios over a list of mesh sizes.
    Observability,
    /// Predicted and fitted decay rates over a (gain, cut level) grid.
    DecayReport,
}

impl VerbArg {
    fn to_verb(&self) -> Verb {
        match self {
            VerbArg::Spectrum => Verb::Spectrum,
            VerbArg::Simulate => Verb::Simulate,
            VerbArg::Observability => Verb::Observability,
            VerbArg::DecayReport => Verb::DecayReport,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl FormatArg {
    fn to_choice(self) -> FormatChoice {
        match self {
            FormatArg::Csv => FormatChoice::Csv,
            FormatArg::Json => FormatChoice::Json,
        }
    }
}

fn config_text(cli: &Cli) -> Result<String, CliError> {
    match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "--config and --preset are mutually exclusive".to_string(),
        )),
        (Some(path), None) => fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        }),
        (None, Some(name)) => presets::preset(name).map(str::to_string).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset \"{name}\"; available: {}",
                presets::names().join(", ")
            ))
        }),
        (None, None) => Err(CliError::Config(
            "one of --config or --preset is required".to_string(),
        )),
    }
}

fn real_main(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let out_dir = cli
        .out_dir
        .clone()
        .ok_or_else(|| CliError::Config("--out-dir is required".to_string()))?;
    let text = config_text(cli)?;
    let format = cli.format.map(FormatArg::to_choice);
    let artifacts = run(cli.verb.to_verb(), &text, format)?;
    write_artifacts(&artifacts, &out_dir)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match real_main(&cli) {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
            eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
