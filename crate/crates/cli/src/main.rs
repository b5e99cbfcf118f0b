use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncalc::SeriesParams;
use ncalc_cli::{list_scenarios, render_json, render_text, run_scenario, CliError, Options};

#[derive(Parser)]
#[command(
    name = "ncalc",
    version,
    about = "Run calculus checks over division algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List available scenarios.
    List,
    /// Run one scenario and print its report.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    scenario: String,
    /// Relative tolerance for series truncation.
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    /// Maximum number of series terms.
    #[arg(long, default_value_t = 64)]
    max_terms: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = ncalc::diffeq::DEFAULT_PROBES)]
    probes: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Algebra tag: real, complex or quaternion.
    #[arg(long)]
    algebra: Option<String>,
    /// Constant for the elliptic family, e.g. "1" or "2 - j + 0.5k".
    #[arg(long)]
    c: Option<String>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            print!("{}", list_scenarios());
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let series = match SeriesParams::new(args.tol, args.max_terms) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let options = Options {
        series,
        seed: args.seed,
        probes: args.probes,
        algebra: args.algebra,
        c: args.c,
    };
    match run_scenario(&args.scenario, &options) {
        Ok(payload) => {
            match args.format {
                Format::Text => print!("{}", render_text(&payload)),
                Format::Json => println!("{}", render_json(&payload)),
            }
            if payload.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ CliError::UnknownScenario(_)) => {
            eprintln!("error: {e}\navailable scenarios:\n{}", list_scenarios());
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
