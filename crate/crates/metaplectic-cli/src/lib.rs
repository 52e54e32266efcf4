//! Library core of the experiment runner: the JSON config schema, the
//! per-kind runners, and the artifact writers. The binary in `main.rs` is a
//! thin clap wrapper around [`execute`].

use std::path::{Path, PathBuf};

pub mod artifacts;
pub mod config;
pub mod runners;

use config::ExperimentConfig;

/// A failure that precludes or aborts the run (exit code 1).
#[derive(Debug)]
pub struct CliError {
    pub stage: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: String) -> CliError {
        CliError { stage: "config", message }
    }

    pub fn io(message: String) -> CliError {
        CliError { stage: "io", message }
    }

    pub fn run(message: String) -> CliError {
        CliError { stage: "run", message }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<metaplectic::Error> for CliError {
    fn from(e: metaplectic::Error) -> CliError {
        CliError::run(e.to_string())
    }
}

/// How a completed run ends. Ordered by severity; the worst one observed
/// decides the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RunStatus {
    /// Everything within tolerance.
    Clean,
    /// Clipped mass above the warning threshold (exit 3).
    GridWarning,
    /// An inequality ratio fell below `1 - tol`, or a stated expectation
    /// failed (exit 2).
    Violation,
}

impl RunStatus {
    pub fn label(self) -> &'static str {
        match self {
            RunStatus::Clean => "ok",
            RunStatus::GridWarning => "grid_warning",
            RunStatus::Violation => "inequality_violation",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            RunStatus::Clean => 0,
            RunStatus::GridWarning => 3,
            RunStatus::Violation => 2,
        }
    }
}

/// What a runner hands back: the summary document (already containing the
/// `status` field) and the lines for the terminal report.
pub struct RunOutput {
    pub summary: serde_json::Value,
    pub status: RunStatus,
    pub report: Vec<String>,
}

/// Shared run inputs derived from the command line.
pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
    pub tol_override: Option<f64>,
}

impl RunContext {
    /// Ratio tolerance: `--tol`, else the config value, else 1e-3.
    pub fn tolerance(&self, cfg: &ExperimentConfig) -> Result<f64, CliError> {
        let tol = self.tol_override.or(cfg.tolerance).unwrap_or(1e-3);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::config(format!(
                "tolerance must be finite and nonnegative, got {tol}"
            )));
        }
        Ok(tol)
    }
}

/// Runs one parsed experiment of the given kind and writes its artifacts.
pub fn execute(kind: &str, cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    if cfg.kind != kind {
        return Err(CliError::config(format!(
            "config kind {:?} does not match the subcommand {kind:?}",
            cfg.kind
        )));
    }
    match kind {
        "constants" => runners::constants::run(cfg, ctx),
        "transform" => runners::transform::run(cfg, ctx),
        "heisenberg" => runners::heisenberg::run(cfg, ctx),
        "sweep" => runners::sweep::run(cfg, ctx),
        "beurling" => runners::beurling::run(cfg, ctx),
        "morgan" => runners::morgan::run(cfg, ctx),
        other => Err(CliError::config(format!("unknown experiment kind {other:?}"))),
    }
}

/// Resolves a config-relative artifact name inside the output directory.
pub fn artifact_path(out_dir: &Path, name: &str) -> PathBuf {
    out_dir.join(name)
}
