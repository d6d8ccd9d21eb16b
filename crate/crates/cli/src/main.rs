mod commands;
mod error;
mod problem;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tropheight_core::doubling::DEFAULT_ORBIT_BUDGET;

use commands::{Report, Settings};
use error::CliError;
use problem::ProblemFile;

#[derive(Parser, Debug)]
#[command(name = "tropheight", version, about = "Exact canonical heights on tropical tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Problem file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Where to write the result; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Maximum number of orbit points explored.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_BUDGET)]
    budget: usize,
    /// Depth of the truncated series evaluator.
    #[arg(long, global = true, default_value_t = 64)]
    series_depth: usize,
    /// Pointwise evaluator: exact, series or tate.
    #[arg(long, global = true)]
    evaluator: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Transfer matrix and canonical cell integrals.
    SolveTransfer,
    /// Integral of the canonical Weil function against the skeleton measure.
    IntegrateCanonical,
    /// Canonical measure from the strata and its mass check.
    AssembleMeasure,
    /// Local integral including model corrections.
    LocalIntegral,
    /// Height certificate from the ledger.
    Height,
    /// Compare the orbit solver with the Tate closed form.
    TateCheck,
    /// Run every structural check on the file.
    Validate,
    /// Table of exact values for plotting.
    Plot {
        #[arg(long)]
        resolution: Option<u32>,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let path = cli.input.as_ref().ok_or_else(|| CliError::Parse("--input is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let file = ProblemFile::parse(&text)?;
    let settings = Settings { budget: cli.budget, series_depth: cli.series_depth, evaluator: cli.evaluator.clone() };
    match cli.command {
        Command::SolveTransfer => commands::solve_transfer(&file, &settings),
        Command::IntegrateCanonical => commands::integrate_canonical(&file, &settings),
        Command::AssembleMeasure => commands::assemble(&file),
        Command::LocalIntegral => commands::local(&file, &settings),
        Command::Height => commands::height(&file, &settings),
        Command::TateCheck => commands::tate_check(&file, &settings),
        Command::Validate => commands::validate(&file, &settings),
        Command::Plot { resolution } => commands::plot(&file, &settings, resolution),
    }
}

fn write_output(cli: &Cli, document: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(document).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn fail(err: &CliError) -> ExitCode {
    let doc = serde_json::to_string(&err.document()).unwrap_or_else(|_| err.to_string());
    eprintln!("{doc}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|report| write_output(&cli, &report.document).map(|()| report.failed)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            let err = CliError::Validation("checks failed; see the output document".into());
            fail(&err)
        }
        Err(err) => fail(&err),
    }
}
