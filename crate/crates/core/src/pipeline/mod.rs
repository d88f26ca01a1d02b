//! End-to-end runs: ingest, algorithms, logic and the embedded self-test.
//!
//! Every run is a pure function of the resolved [`RunConfig`] and the input
//! bytes. Artifacts carry no timestamps or paths, so repeated runs (and runs
//! with different thread counts) produce byte-identical output trees.

mod config;
mod output;
mod run;
mod selftest;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{
    preset, split_list, ConfigLayer, Format, PipelineKind, Preset, RegionConfig, RunConfig, DEFAULT_OUT_DIR,
    DEFAULT_PATH_LIMIT, DEFAULT_SEED, DEFAULT_TABLE_HEIGHT, PRESET_NAMES,
};
pub use output::{input_digest, ArtifactEntry};
pub use run::{
    cmd_algorithms, cmd_ingest, cmd_logic, load_region, IngestOutcome, LoadedRegion, Provenance, RunReport,
    StageSummary, REFERENCE_REGIONS,
};
pub use selftest::{run_selftest, CheckResult, SelftestOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_STAGE_ERROR: i32 = 1;
pub const EXIT_CONFIG_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("[{stage}] {source}")]
    Stage { stage: &'static str, source: Box<dyn std::error::Error + Send + Sync> },
    #[error("[write] {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => EXIT_CONFIG_ERROR,
            PipelineError::Stage { .. } | PipelineError::Io { .. } => EXIT_STAGE_ERROR,
        }
    }

    pub fn stage(&self) -> Option<&'static str> {
        match self {
            PipelineError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    /// Downcasts the underlying module error of a stage failure.
    pub fn stage_source<E: std::error::Error + 'static>(&self) -> Option<&E> {
        match self {
            PipelineError::Stage { source, .. } => source.downcast_ref(),
            _ => None,
        }
    }
}

pub(crate) fn at_stage<E>(stage: &'static str) -> impl FnOnce(E) -> PipelineError
where
    E: std::error::Error + Send + Sync + 'static,
{
    move |e| PipelineError::Stage { stage, source: Box::new(e) }
}
