//! `fnls run <config>`, `fnls validate <config>`, `fnls list-kinds`.
//!
//! Exit codes: 0 success, 2 config or parameter error, 3 summation budget
//! exceeded, 4 numerical abort, 5 I/O failure. The only environment knob is
//! `FNLS_THREADS`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fnls_core::experiment::{report_path, run_config, ExperimentConfig, ExperimentKind};
use fnls_core::par::{init_threads_from_env, Exec};
use fnls_core::Error;

#[derive(Parser)]
#[command(
    name = "fnls",
    version,
    about = "Fractional NLS / I-method experiment runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write report.json plus its artifacts.
    Run {
        config: PathBuf,
        /// Disable intra-experiment parallelism.
        #[arg(long)]
        sequential: bool,
    },
    /// Parse and validate a config without computing anything.
    Validate { config: PathBuf },
    /// List the experiment kinds a config may name.
    ListKinds,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("fnls: {e}");
    if let Error::BudgetExceeded { .. } = e {
        eprintln!("fnls: lower num_points or the number of active modes to shrink the direct sum");
    }
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListKinds => {
            for k in ExperimentKind::ALL {
                println!("{:<20} {}", k.name(), k.summary());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            match ExperimentConfig::load(&config).and_then(|c| c.validate().map(|_| c)) {
                Ok(c) => {
                    println!("ok: {} -> {}", c.kind.name(), c.output_dir.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Run { config, sequential } => {
            let threads = init_threads_from_env();
            let exec = if sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            };
            let cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            match run_config(&cfg, exec) {
                Ok(rep) => {
                    println!("kind      {}", rep.kind.name());
                    println!("hash      {}", rep.input_hash);
                    println!("seed      {}", rep.seed);
                    println!("threads   {}", if sequential { 1 } else { threads });
                    println!("duration  {:.3}s", rep.duration_seconds);
                    for (k, v) in &rep.scalars {
                        println!("  {k} = {v:?}");
                    }
                    println!("report    {}", report_path(&cfg).display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
