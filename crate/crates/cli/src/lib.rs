//! Config-driven experiments for double-bracket iterations.
//!
//! A run reads one JSON [`ExperimentConfig`], executes the named experiment
//! and writes CSV tables, `report.json`, `timing.json` and a matplotlib
//! script `plot.py` into the output directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub mod config;
pub mod experiments;
pub mod plot;
pub mod table;

pub use config::{Experiment, ExperimentConfig, GeneratorEntry, ModelConfig};
pub use plot::{emit_plot_script, Panel, PlotSpec};
pub use table::Table;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "DBI_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, String),
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The experiment stopped on a numerical error; partial outputs were
    /// written where possible.
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write outputs: {0}")]
    Output(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) | RunError::Output(_) => 3,
        }
    }
}

impl From<dbi_core::DbiError> for RunError {
    fn from(e: dbi_core::DbiError) -> Self {
        RunError::Numerical(e.to_string())
    }
}

/// Everything an experiment produced, before it is written to disk.
#[derive(Clone, Debug, Default)]
pub struct Outputs {
    pub tables: Vec<(String, Table)>,
    pub steps: Vec<Value>,
    pub summary: BTreeMap<String, Value>,
    pub plot: PlotSpec,
    /// Set when the experiment ended on a numerical error after producing
    /// partial results.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub experiment: String,
    pub config: ExperimentConfig,
    pub outputs: Vec<String>,
    pub steps: Vec<Value>,
    pub summary: BTreeMap<String, Value>,
    pub status: String,
}

/// Runs the experiment in memory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(RunReport, Outputs), RunError> {
    config.validate()?;
    let out = experiments::run(config)?;
    let mut outputs: Vec<String> = out.tables.iter().map(|(name, _)| name.clone()).collect();
    outputs.push("report.json".into());
    outputs.push("plot.py".into());
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        experiment: config.experiment.name().into(),
        config: config.clone(),
        outputs,
        steps: out.steps.clone(),
        summary: out.summary.clone(),
        status: match &out.failure {
            None => "ok".into(),
            Some(msg) => format!("failed: {msg}"),
        },
    };
    Ok((report, out))
}

/// Writes the tables, `report.json` and `plot.py` into `dir`.
pub fn write_outputs(dir: &Path, report: &RunReport, outputs: &Outputs) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Output(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for (name, table) in &outputs.tables {
        table.write(&dir.join(name)).map_err(|e| RunError::Output(format!("{name}: {e}")))?;
    }
    let json = serde_json::to_string_pretty(report).map_err(|e| RunError::Output(e.to_string()))?;
    fs::write(dir.join("report.json"), json + "\n").map_err(io)?;
    fs::write(dir.join("plot.py"), emit_plot_script(&outputs.plot)).map_err(io)?;
    Ok(())
}

/// Output directory after applying [`OUTPUT_DIR_ENV`].
pub fn resolve_output_dir(config: &ExperimentConfig) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => config.output_dir.clone(),
    }
}

/// Runs a config end to end, writing into `dir`. Wall time goes to
/// `timing.json` so that `report.json` stays reproducible.
pub fn run_to_dir(config: &ExperimentConfig, dir: &Path) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let (report, outputs) = run_experiment(config)?;
    write_outputs(dir, &report, &outputs)?;
    let timing = serde_json::json!({ "wall_time_seconds": start.elapsed().as_secs_f64() });
    fs::write(dir.join("timing.json"), timing.to_string() + "\n")
        .map_err(|e| RunError::Output(format!("{}: {e}", dir.display())))?;
    if let Some(msg) = outputs.failure {
        return Err(RunError::Numerical(msg));
    }
    Ok(report)
}
