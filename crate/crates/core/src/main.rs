use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qwhydro::cli::{exit_code, parse_config, run_experiment, thread_cap, Experiment};
use qwhydro::parallel::init_thread_pool;
use qwhydro::Error;

#[derive(Parser)]
#[command(name = "qwhydro", version, about = "Quantum-walk hydrodynamics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Parse and validate a config file without running it.
    Validate { config: PathBuf },
    /// List the named experiments.
    ListExperiments,
}

fn load(path: &PathBuf) -> Result<qwhydro::cli::SimConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(err) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match thread_cap(std::env::var("QWHYDRO_THREADS").ok().as_deref()) {
        Ok(cap) => init_thread_pool(cap),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<18} {}", e.name(), e.description());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("{}: valid {} config", config.display(), cfg.experiment);
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Run { config } => {
            let cfg = match load(&config) {
                Ok(cfg) => cfg,
                Err(e) => return fail(&e),
            };
            match run_experiment(&cfg) {
                Ok(report) => {
                    for p in &report.outputs {
                        println!("wrote {}", p.display());
                    }
                    println!("wrote {}", report.manifest_path.display());
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        for c in report.failed_checks() {
                            eprintln!("check failed: {} = {:e} exceeds {:e}", c.name, c.value, c.tolerance);
                        }
                        ExitCode::from(2)
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}
