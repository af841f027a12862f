//! Batch front end: JSON experiment configs, seeded runs of every flow,
//! CSV/JSON output and the invariant audit.
//!
//! Exit codes used by the binary: 0 success, 2 configuration error,
//! 3 numerical failure or violated invariant.

mod audit;
mod config;
mod output;
mod run;
mod schema;

use std::path::{Path, PathBuf};

pub use audit::{
    audit, injected_fault_channel, suite_names, threads_from_env, AuditOptions, AuditReport,
    SuiteResult, THREADS_ENV,
};
pub use config::{
    AggregationMode, AggregationParams, AuditParams, BasisSpec, BoxFlowParams, ChannelConfig,
    DiffusionParams, EnsembleSpec, ExperimentConfig, ExperimentKind, FamilyName, FamilyParams,
    GridGenerator, GridSpec, HilbertParams, MatrixLiteral, OutputFormat, OutputSpec, PairOrder,
    Parameters, StateSpec, TimeParams, CONFIG_VERSION,
};
pub use output::{revalidate_csv, write_atomic, Cell, Table, ROUND_TRIP_TOL};
pub use run::{
    run, RunOutput, BOUND_TOL, CLASSICAL_MONOTONE_TOL, MASS_TOL, QUANTUM_MONOTONE_TOL,
};
pub use schema::{column_names, columns, describe, Column};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Files written by [`write_outputs`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WrittenFiles {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

/// Output stem: the config's `output.path`, moved into `out_dir` when given,
/// else `<kind>` in `out_dir` (or the working directory).
pub fn output_stem(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> PathBuf {
    let configured = cfg.output.as_ref().map(|o| o.path.clone());
    match (configured, out_dir) {
        (Some(p), Some(dir)) => dir.join(p.file_name().map(PathBuf::from).unwrap_or_else(|| cfg.kind.as_str().into())),
        (Some(p), None) => p,
        (None, Some(dir)) => dir.join(cfg.kind.as_str()),
        (None, None) => PathBuf::from(cfg.kind.as_str()),
    }
}

fn with_extension(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `<stem>.csv` and/or `<stem>.json` atomically. `extra` is merged
/// into the summary (used for optional timing).
pub fn write_outputs(out: &RunOutput, stem: &Path, format: OutputFormat, extra: Option<(&str, serde_json::Value)>) -> Result<WrittenFiles> {
    let mut written = WrittenFiles::default();
    if format.writes_csv() {
        let csv = out.table.to_csv()?;
        revalidate_csv(&csv)?;
        let p = with_extension(stem, "csv");
        write_atomic(&p, &csv)?;
        written.csv = Some(p);
    }
    if format.writes_json() {
        let mut summary = out.summary.clone();
        if let Some((k, v)) = extra {
            summary[k] = v;
        }
        let mut text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        let p = with_extension(stem, "json");
        write_atomic(&p, &text)?;
        written.json = Some(p);
    }
    Ok(written)
}
