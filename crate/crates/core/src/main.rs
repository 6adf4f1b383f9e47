use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use thermoplate::cli::{list_experiments, run, RunOptions, Status};

#[derive(Parser)]
#[command(name = "thermoplate", version, about = "Spectral experiments for damped thermoelastic plates")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Directory receiving the CSV tables and the manifest.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        threads: Option<usize>,
        /// Run times beyond the trustworthy horizon with a warning instead of an error.
        #[arg(long)]
        allow_horizon_violation: bool,
    },
    /// List the experiment names.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Args::parse().command {
        Command::List => {
            for (name, description) in list_experiments() {
                println!("{name:<22} {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            out,
            threads,
            allow_horizon_violation,
        } => {
            if let Some(k) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            let opts = RunOptions {
                out_dir: out,
                allow_horizon_violation,
            };
            match run(&config, &opts) {
                Ok(outcome) => {
                    for c in &outcome.manifest.criteria {
                        let tag = match c.status {
                            Status::Pass => "PASS",
                            Status::Fail => "FAIL",
                            Status::Recorded => "INFO",
                        };
                        let measured = c.measured.map_or("-".to_string(), |m| format!("{m:.6e}"));
                        println!("{tag} {} measured={measured}", c.name);
                    }
                    println!("manifest: {}", outcome.manifest_path.display());
                    if outcome.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
