//! Experiment runner for the `madd` command: generates or loads data, runs
//! clustering methods and cluster-count estimators over repeated trials, and
//! writes trial CSVs, JSON summaries and SVG plots.

pub mod config;
pub mod error;
pub mod experiment;
pub mod ingest;
pub mod reproduce;
pub mod svg;

pub use config::{DataSource, ExperimentConfig};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, summarize, ExperimentOutput, Summary, SummaryReport, TrialRecord};
pub use ingest::{ingest_csv, Ingested};
pub use reproduce::{reproduce, Scale, Table};
