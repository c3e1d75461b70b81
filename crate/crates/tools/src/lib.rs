//! Batch front end for `ndde-core`: run configurations, CSV/JSON artifacts
//! and the `ndde` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, Command, RunConfig};
pub use error::ToolError;
use output::Emitter;

/// Flags that do not belong to the config (and so not to its digest).
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Output directory; falls back to `output.directory`, then `./out`.
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps; defaults to the logical core count.
    pub jobs: Option<usize>,
    /// Reserved: nothing is stochastic yet.
    pub seed: Option<u64>,
}

/// Runs one configuration and returns the files written.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, ToolError> {
    let dir = opts
        .out
        .clone()
        .or_else(|| cfg.output.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| Path::new("out").to_path_buf());
    let mut out = Emitter::new(&dir, cfg.digest())?;
    let jobs = opts
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(ToolError::Config {
            path: "--jobs".into(),
            message: "must be at least 1".into(),
        });
    }
    let pool = || {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| ToolError::Io(e.to_string()))
    };
    match cfg.command {
        Command::Simulate => commands::simulate(cfg, &mut out)?,
        Command::Spectrum => commands::spectrum(cfg, &mut out)?,
        Command::Diagram => commands::diagram(cfg, &mut out, &pool()?)?,
        Command::Divisors => commands::divisors(cfg, &mut out, &pool()?)?,
        Command::Periodic => commands::periodic(cfg, &mut out)?,
        Command::Validate => commands::validate(cfg, &mut out)?,
    }
    Ok(out.into_written())
}
