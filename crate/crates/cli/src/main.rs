mod batch;
mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::{resolve, Cli};

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    if cfg.input.is_dir() {
        return match batch::run_batch(&cfg) {
            Ok(outcome) => {
                for (path, err) in &outcome.failed {
                    eprintln!("error: {}: {err}", path.display());
                }
                println!(
                    "{} processed, {} failed; outputs in {}",
                    outcome.succeeded,
                    outcome.failed.len(),
                    cfg.output.display()
                );
                if outcome.succeeded == 0 {
                    ExitCode::from(EXIT_RUNTIME)
                } else {
                    ExitCode::SUCCESS
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_RUNTIME)
            }
        };
    }

    match run::process_file(&cfg, &cfg.input, &cfg.output) {
        Ok(report) => {
            println!("{report}");
            println!("method {} -> {}", cfg.method, cfg.output.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
