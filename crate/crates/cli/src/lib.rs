//! Batch runner for the checks in `cauchy-core`: a JSON config lists jobs,
//! each producing a report; the summary decides the exit code.

pub mod config;
pub mod explain;
pub mod runner;

pub use config::{ConfigError, Job, JobConfig, JobSpec, Task, KINDS};
pub use explain::{explain, explain_summary};
pub use runner::{execute, run_jobs, Counts, RunOptions, RunSummary};

/// Parses, validates and runs a config given as JSON text.
pub fn run_config_str(text: &str, opts: RunOptions) -> Result<RunSummary, ConfigError> {
    let jobs = JobConfig::from_json(text)?.prepare()?;
    Ok(run_jobs(&jobs, opts))
}

/// Serialized summary; stable across runs when timings are off.
pub fn summary_json(s: &RunSummary) -> String {
    let mut text = serde_json::to_string_pretty(s).expect("reports are plain data");
    text.push('\n');
    text
}
