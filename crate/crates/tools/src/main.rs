use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ndde_tools::{load_config, run, RunOptions};

/// Simulate and analyze the critical neutral delay equation
/// y'(t) + c y'(t-1) + f(y(t)) + g(y(t-1)) = s(t).
#[derive(Parser, Debug)]
#[command(name = "ndde", version)]
struct Cli {
    /// Run configuration (.toml or .json).
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for sweeps (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory (default: output.directory, else ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reserved; no stochastic components yet.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = load_config(&cli.config).and_then(|cfg| {
        run(
            &cfg,
            &RunOptions {
                out: cli.out,
                jobs: cli.jobs,
                seed: cli.seed,
            },
        )
    });
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
