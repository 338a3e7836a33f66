use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sumpipe_cli::config::PipelineConfig;
use sumpipe_cli::error::PipelineError;
use sumpipe_cli::stages::{
    cmd_clean, cmd_evaluate, cmd_extract, cmd_report, cmd_run, cmd_summarize, RunContext, StageFn,
};

/// Hybrid long-document summarization pipeline.
#[derive(Parser)]
#[command(name = "sumpipe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StageArgs {
    /// Pipeline configuration file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Skip documents whose stage artifacts already exist.
    #[arg(long)]
    resume: bool,
    /// Only process these document ids.
    #[arg(long, value_delimiter = ',')]
    docs: Vec<String>,
    /// Replace every provider with its deterministic offline mock.
    #[arg(long)]
    mock_providers: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Clean raw corpus text into normalized documents.
    Clean(StageArgs),
    /// Select the most central sentences from cleaned documents.
    Extract(StageArgs),
    /// Drive the chat provider over the extracted sentences.
    Summarize(StageArgs),
    /// Score extractive, abstractive and reference summaries.
    Evaluate(StageArgs),
    /// Aggregate metric reports into CSV and Markdown tables.
    Report(StageArgs),
    /// All five stages in order.
    Run(StageArgs),
}

fn execute() -> Result<(), PipelineError> {
    let cli = Cli::parse();
    let (args, stage): (&StageArgs, StageFn) = match &cli.command {
        Command::Clean(a) => (a, cmd_clean),
        Command::Extract(a) => (a, cmd_extract),
        Command::Summarize(a) => (a, cmd_summarize),
        Command::Evaluate(a) => (a, cmd_evaluate),
        Command::Report(a) => (a, cmd_report),
        Command::Run(a) => (a, cmd_run),
    };
    let config = PipelineConfig::load(&args.config)?;
    let ctx = RunContext::new(config, &args.docs, args.resume, args.mock_providers)?;
    stage(&ctx)
}

fn main() -> ExitCode {
    env_logger::init();
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
