use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sbp_swe::cli::{run, sweep, verify, CliError, ParamRange, RunConfig, OUTPUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(name = "sbp-swe", version, about = "Entropy-stable SBP shallow water solver")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write solution, diagnostics and summary files.
    Run { config: PathBuf },
    /// Run a grid of (a1, a2) values and write sweep.csv.
    Sweep {
        config: PathBuf,
        /// Range `lo:step:hi` or a single value.
        #[arg(long, default_value = "-3:0.1:3", allow_hyphen_values = true)]
        a1: String,
        #[arg(long, default_value = "-3:0.1:3", allow_hyphen_values = true)]
        a2: String,
    },
    /// Run the seeded property suite and print one line per check.
    Verify { config: PathBuf },
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let summary = run(&cfg)?;
            println!(
                "{}: {} steps to t = {}, max error {}, entropy drift {:.3e}, min h {:.3e} -> {}",
                summary.settings.scenario,
                summary.steps,
                summary.t,
                summary
                    .max_error
                    .map_or_else(|| "n/a".to_string(), |e| format!("{e:.3e}")),
                summary.entropy_drift,
                summary.min_h,
                cfg.output_root().display(),
            );
            Ok(true)
        }
        Command::Sweep { config, a1, a2 } => {
            let cfg = RunConfig::load(&config)?;
            let (a1, a2): (ParamRange, ParamRange) = (a1.parse()?, a2.parse()?);
            let rows = sweep(&cfg, &a1, &a2)?;
            let failed = rows.iter().filter(|r| r.status != "ok").count();
            println!(
                "{} runs, {failed} failed -> {}",
                rows.len(),
                cfg.output_root().join("sweep.csv").display()
            );
            Ok(true)
        }
        Command::Verify { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = verify(&cfg)?;
            print!("{}", report.render());
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Io(_)) {
                eprintln!("(output root can be overridden with {OUTPUT_DIR_ENV})");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
