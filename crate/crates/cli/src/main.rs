//! `vinogradov` — exact counting and circle-method numerics for the
//! shifted cubic moment system.
//!
//! Exit status: 0 on success, 1 when a computation or verification
//! fails, 2 on usage or validation errors.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use vinogradov::error::Error;
use vinogradov_cli::commands::{
    self, AsymptoticArgs, CacheArgs, CommandOutput, CountArgs, DensityArgs, DissectArgs,
    IntegralArgs, WeylArgs,
};
use vinogradov_cli::config::resolve_cache_dir;
use vinogradov_cli::suite::{self, VerifyArgs};

#[derive(Parser, Debug)]
#[command(
    name = "vinogradov",
    version,
    about = "Exact counts and circle-method numerics for a shifted cubic moment system",
    propagate_version = true
)]
struct Cli {
    /// Write machine-readable result records (one JSON object per
    /// line) to this file, or `-` for stdout (suppresses the table).
    #[arg(long, global = true, value_name = "PATH")]
    records: Option<PathBuf>,

    /// Directory for cached representation tables.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// JSON configuration file (recognized key: `cache_dir`).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count solutions of the shifted system exactly.
    Count(CountArgs),
    /// Compare exact counts against the predicted local product.
    Asymptotic(AsymptoticArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Sample the arc dissection at scale X.
    Dissect(DissectArgs),
    /// Probe exponential-sum bounds on minor and major arcs.
    Weyl(WeylArgs),
    /// Compute a p-adic solution density by two routes.
    Density(DensityArgs),
    /// Evaluate the truncated singular integral.
    Integral(IntegralArgs),
    /// Inspect or clear the table cache.
    Cache(CacheArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Budget { .. } => ExitCode::from(2),
                Error::Cache(_) | Error::Io(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let cache_dir =
        resolve_cache_dir(cli.cache_dir.clone(), cli.config.as_deref()).map_err(Error::Config)?;
    let dir = cache_dir.as_deref();
    let (output, ok): (CommandOutput, bool) = match &cli.command {
        Command::Count(args) => (commands::cmd_count(args, dir)?, true),
        Command::Asymptotic(args) => (commands::cmd_asymptotic(args, dir)?, true),
        Command::Verify(args) => suite::cmd_verify(args, dir)?,
        Command::Dissect(args) => (commands::cmd_dissect(args)?, true),
        Command::Weyl(args) => (commands::cmd_weyl(args)?, true),
        Command::Density(args) => (commands::cmd_density(args)?, true),
        Command::Integral(args) => (commands::cmd_integral(args)?, true),
        Command::Cache(args) => (commands::cmd_cache(args, dir)?, true),
    };
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    let mut human_to_stdout = true;
    if let Some(path) = &cli.records {
        let mut lines = String::new();
        for record in &output.records {
            lines.push_str(&record.to_line());
            lines.push('\n');
        }
        if path.as_os_str() == "-" {
            print!("{lines}");
            human_to_stdout = false;
        } else {
            std::fs::write(path, lines)?;
        }
    }
    if human_to_stdout {
        print!("{}", output.human);
    }
    Ok(ok)
}
