use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quasiid_cli::{run_analysis, AnalysisConfig, CliError};

#[derive(Parser)]
#[command(name = "quasiid", version)]
#[command(about = "Second-difference criteria for rational infinite divisibility")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse every distribution in a JSON config and write a report
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to the JSON analysis config
    #[arg(long)]
    config: PathBuf,
    /// Report path, overriding `outputs.report`
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-distribution trace CSVs, overriding `outputs.traces`
    #[arg(long)]
    export_traces: Option<PathBuf>,
    /// Comma-separated probe points, overriding `t_probes`
    #[arg(long, value_delimiter = ',')]
    probes: Option<Vec<f64>>,
}

fn analyze(args: AnalyzeArgs) -> Result<u8, CliError> {
    let mut config = AnalysisConfig::load(&args.config)?;
    if let Some(out) = args.out {
        config.outputs.report = out;
    }
    if let Some(dir) = args.export_traces {
        config.outputs.traces = Some(dir);
    }
    if let Some(probes) = args.probes {
        config.t_probes = probes;
    }
    let summary = run_analysis(&config)?;
    Ok(summary.exit_code())
}

fn main() -> ExitCode {
    let Command::Analyze(args) = Cli::parse().command;
    match analyze(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
