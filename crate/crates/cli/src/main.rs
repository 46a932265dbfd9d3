mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use report::{Outcome, RunReport};

fn configure_threads(requested: Option<usize>) {
    let from_env = std::env::var("AEQ_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok());
    if let Some(k) = from_env.or(requested).filter(|&k| k > 0) {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            let rep = RunReport::error("aeq", serde_json::Value::Null, e.kind().to_string());
            rep.print();
            return ExitCode::from(2);
        }
    };
    configure_threads(cli.global.threads);
    let outcome = commands::run(&cli);
    ExitCode::from(match outcome {
        Outcome::Pass => 0,
        Outcome::Fail | Outcome::Infeasible => 1,
        Outcome::Error => 2,
    })
}
