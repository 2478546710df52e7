//! Experiment harness: multi-run training sweeps, metrics CSV, SVG curves.

mod config;
mod experiment;
mod manifest;
mod metrics;
mod plot;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_config, AlgoChoice, CliOverrides, ExperimentConfig};
pub use experiment::{random_baseline, run_experiment, run_single};
pub use manifest::RunManifest;
pub use metrics::{write_metrics_csv, MetricRow, MetricsTable};
pub use plot::{moving_average, render_training_curve, write_training_curve};

use crate::kv::KvError;
use crate::marl::MarlError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Kv(#[from] KvError),
    #[error("invalid experiment config: {0}")]
    Invalid(String),
    #[error("{algorithm} run {run}: {source}")]
    Run {
        algorithm: &'static str,
        run: usize,
        #[source]
        source: MarlError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
