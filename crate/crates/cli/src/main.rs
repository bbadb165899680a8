//! `prs`: sample, analyse, check, verify and benchmark partial rejection
//! sampling encodings from the command line.

mod commands;
mod error;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{analyze, bench, check, sample, verify, Global};
use error::{exit, CliError};
use output::{Format, Report};

/// Iteration cap used when --cap is not given.
const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "prs", version, about = "Partial rejection sampling toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Base table seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per run.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Worker threads for parallel runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw samples and print the decoded objects.
    Sample(sample::SampleArgs),
    /// Violation probabilities, q values and predicted resampling counts.
    Analyze(analyze::AnalyzeArgs),
    /// Extremality, atomicity and dependency axiom checks.
    Check(check::CheckArgs),
    /// Compare sampler output with the exact distribution.
    Verify(verify::VerifyArgs),
    /// Mean resampling counts against graph size, as CSV.
    Bench(bench::BenchArgs),
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    if cli.cap == 0 {
        return Err(CliError::Usage("--cap must be at least 1".into()));
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let global = Global {
        seed: cli.seed,
        cap: cli.cap,
    };
    let mut out = Report::new(match cli.command {
        Command::Bench(_) => Format::Csv,
        _ => cli.format,
    });
    let code = match &cli.command {
        Command::Sample(a) => sample::run(a, &global, &mut out).map(|_| exit::OK),
        Command::Analyze(a) => analyze::run(a, &global, &mut out).map(|_| exit::OK),
        Command::Check(a) => check::run(a, &global, &mut out).map(|_| exit::OK),
        Command::Verify(a) => verify::run(a, &global, &mut out).map(|pass| if pass { exit::OK } else { exit::CHECK_FAILED }),
        Command::Bench(a) => bench::run(a, &global, &mut out).map(|_| exit::OK),
    }?;
    print!("{}", out.finish()?);
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_string()).diagnostic());
            return ExitCode::from(exit::VALIDATION as u8);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.classify().1 as u8)
        }
    }
}
