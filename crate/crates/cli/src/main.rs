use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use homindex::exec::{map_slice, with_threads, Strategy};
use homindex::experiment::{list_registry, run, ExperimentConfig, ExperimentError, ExperimentKind, RunOptions, RunReport};

#[derive(Parser)]
#[command(name = "homindex", version, about = "Homological index experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more JSON experiment configs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Directory for CSV and JSON artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 1 forces sequential evaluation.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the registry of named rules, families and experiment kinds.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Check the omega identities and the 2-cycle property for n = 1..K.
    VerifySymbolic {
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn strategy(jobs: Option<usize>) -> Strategy {
    match jobs {
        Some(1) => Strategy::Sequential,
        _ => Strategy::available(),
    }
}

fn run_one(path: &Path, out: Option<&PathBuf>, strategy: Strategy) -> Result<RunReport, ExperimentError> {
    let cfg = ExperimentConfig::from_path(path)?;
    let opts = RunOptions {
        out_dir: out.cloned(),
        base_dir: path.parent().map(PathBuf::from),
        strategy,
    };
    run(&cfg, &opts)
}

fn report_exit(results: Vec<(String, Result<RunReport, ExperimentError>)>) -> ExitCode {
    let mut code = 0;
    for (label, r) in results {
        match r {
            Ok(rep) => {
                for rec in rep.records.iter().filter(|r| !r.pass) {
                    eprintln!("  FAIL {}: value {} tolerance {}", rec.check_id, rec.value, rec.tolerance);
                }
                println!("{}", rep.summary());
                code = code.max(rep.exit_code());
            }
            Err(e) => {
                eprintln!("{label}: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { configs, out, jobs } => {
            let s = strategy(jobs);
            let results = with_threads(jobs, || map_slice(s, &configs, |p| run_one(p, out.as_ref(), s)));
            report_exit(configs.iter().map(|p| p.display().to_string()).zip(results).collect())
        }
        Command::List { json } => {
            let entries = list_registry();
            if json {
                match serde_json::to_string_pretty(&entries) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("{e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                // A closed pipe (e.g. `| head`) just ends the listing.
                let mut out = std::io::stdout().lock();
                for e in entries {
                    if writeln!(out, "{:<28} {:<16} {}", e.name, e.category, e.parameters.join(",")).is_err() {
                        break;
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Command::VerifySymbolic { n_max, out } => {
            let cfg = ExperimentConfig {
                name: format!("verify-symbolic-n{n_max}"),
                kind: ExperimentKind::VerifySymbolic,
                parameters: serde_json::json!({ "n_max": n_max }).as_object().cloned().unwrap_or_default(),
                seed: 0,
                tolerances: Default::default(),
            };
            let opts = RunOptions { out_dir: out, base_dir: None, strategy: Strategy::available() };
            report_exit(vec![(cfg.name.clone(), run(&cfg, &opts))])
        }
    }
}
