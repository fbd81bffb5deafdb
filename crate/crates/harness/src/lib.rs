//! Experiment grids, statistics, file formats and the `qngd` command line
//! on top of [`qngd_core`].

use std::path::PathBuf;

pub mod cli;
pub mod experiment;
pub mod io;
pub mod pauli_file;
pub mod stats;

pub use experiment::{
    run_experiment, ExperimentResult, ExperimentSpec, GridEntry, ModelSpec, SchemeSpec,
};
pub use stats::{summarize, Summary};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] qngd_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    PauliFile {
        path: PathBuf,
        source: qngd_core::Error,
    },
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("no run records to summarise")]
    Empty,
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("write failed: {0}")]
    Write(std::io::Error),
}
