//! Experiment runner: JSON configs in, CSV tables and a JSON manifest out.

pub mod config;
pub mod data;
pub mod experiments;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub use config::{ExperimentConfig, ExperimentKind, Validated};
pub use experiments::execute;
pub use output::{Cell, Comparison, Criterion, Manifest, Report, Status, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown experiment `{0}`; `thermoplate list` shows the available names")]
    UnknownExperiment(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] crate::Error),

    #[error(
        "time {t:e} exceeds the trustworthy horizon {horizon:e}; enlarge L or pass --allow-horizon-violation"
    )]
    Horizon { t: f64, horizon: f64 },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub allow_horizon_violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
    pub csv_paths: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.manifest.passed
    }
}

/// Reads, validates and runs the config at `path`.
pub fn run(path: &Path, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    run_config(&ExperimentConfig::from_json(&text)?, opts)
}

/// Runs a parsed config and writes one CSV per table plus one manifest.
pub fn run_config(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let validated = config.validate()?;
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    log::info!("running {} (sigma = {})", validated.kind, config.sigma);
    let report = execute(&validated, opts.allow_horizon_violation)?;
    let wall = clock.elapsed().as_secs_f64();
    fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(&opts.out_dir, e))?;
    let mut csv_paths = Vec::with_capacity(report.tables.len());
    let mut csv_files = Vec::with_capacity(report.tables.len());
    for table in &report.tables {
        let name = table.file_name(&config.output);
        let path = opts.out_dir.join(&name);
        fs::write(&path, table.to_csv()).map_err(|e| CliError::io(&path, e))?;
        csv_paths.push(path);
        csv_files.push(name);
    }
    let manifest = Manifest {
        experiment: validated.kind.name().to_string(),
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_seconds: started,
        wall_clock_seconds: wall,
        threads: rayon::current_num_threads(),
        csv_files,
        passed: report.passed(),
        criteria: report.criteria,
        warnings: report.warnings,
    };
    let manifest_path = opts.out_dir.join(format!("{}.manifest.json", config.output));
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&manifest_path, text).map_err(|e| CliError::io(&manifest_path, e))?;
    Ok(RunOutcome {
        manifest,
        manifest_path,
        csv_paths,
    })
}

/// `(name, description)` for every experiment.
pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    ExperimentKind::ALL.iter().map(|k| (k.name(), k.description())).collect()
}
