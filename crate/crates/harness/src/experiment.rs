//! Repeated-trial experiments: per-trial records, their summary, and the
//! files written for them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use madd_core::clustering::{spectral, SpectralConfig};
use madd_core::datagen::{sample_scenario, ScenarioSpec};
use madd_core::rng::derive_seed;
use madd_core::selection::{
    cv_select, dunn_select, gap_select, jump_select, kl_select, pd_select, Estimator, EstimatorReport,
    JumpMode, KSweep, PenaltySpec,
};
use madd_core::{rand_index, Algorithm, DataMatrix, Dissimilarity, Method};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DataSource, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::ingest::ingest_csv;
use crate::svg::{rand_curves_svg, Series};

pub const SCHEMA_VERSION: u32 = 1;
pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOT_FILE: &str = "rand_vs_dimension.svg";

/// Task name of a clustering run scored by the Rand index.
pub const CLUSTER_TASK: &str = "cluster";

/// One row of the trial CSV: a clustering run or one estimator's choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub d: usize,
    pub trial: usize,
    pub seed: u64,
    pub method: String,
    /// [`CLUSTER_TASK`] or an estimator name.
    pub task: String,
    pub k_true: Option<usize>,
    /// Clusters fitted, or the estimated number of clusters.
    pub k: usize,
    pub rand: Option<f64>,
    /// Spectral bandwidth actually used.
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandSummary {
    pub d: usize,
    pub method: String,
    pub trials: usize,
    pub mean_rand: f64,
    pub sd_rand: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KHatSummary {
    pub d: usize,
    pub method: String,
    pub estimator: String,
    pub k_true: Option<usize>,
    pub trials: usize,
    /// Frequency of each estimated `k`.
    pub counts: BTreeMap<usize, usize>,
}

impl KHatSummary {
    /// Trials that recovered the true `k`.
    pub fn hits(&self) -> Option<usize> {
        self.k_true.map(|k| self.counts.get(&k).copied().unwrap_or(0))
    }
}

/// Everything in the summary that is derived from trial records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rand: Vec<RandSummary>,
    pub k_hat: Vec<KHatSummary>,
}

impl Summary {
    pub fn rand_for(&self, d: usize, method: &str) -> Option<&RandSummary> {
        self.rand.iter().find(|r| r.d == d && r.method == method)
    }

    pub fn k_hat_for(&self, d: usize, method: &str, estimator: &str) -> Option<&KHatSummary> {
        self.k_hat
            .iter()
            .find(|r| r.d == d && r.method == method && r.estimator == estimator)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub summary: Summary,
    /// Generator and estimator notes, deduplicated across trials.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    pub report: SummaryReport,
}

/// Groups by key in order of first appearance.
fn grouped<K: std::hash::Hash + Eq + Clone>(
    records: &[TrialRecord],
    key: impl Fn(&TrialRecord) -> Option<K>,
) -> Vec<(K, Vec<&TrialRecord>)> {
    let mut order: Vec<(K, Vec<&TrialRecord>)> = Vec::new();
    let mut index = HashMap::new();
    for r in records {
        if let Some(k) = key(r) {
            let i = *index.entry(k.clone()).or_insert_with(|| {
                order.push((k, Vec::new()));
                order.len() - 1
            });
            order[i].1.push(r);
        }
    }
    order
}

/// Aggregates trial records; the only input is the records themselves.
pub fn summarize(records: &[TrialRecord]) -> Summary {
    let rand = grouped(records, |r| {
        (r.task == CLUSTER_TASK && r.rand.is_some()).then(|| (r.d, r.method.clone()))
    })
    .into_iter()
    .map(|((d, method), rs)| {
        let values: Vec<f64> = rs.iter().filter_map(|r| r.rand).collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let sigmas: Vec<f64> = rs.iter().filter_map(|r| r.sigma).collect();
        RandSummary {
            d,
            method,
            trials: values.len(),
            mean_rand: mean,
            sd_rand: sd,
            mean_sigma: (!sigmas.is_empty()).then(|| sigmas.iter().sum::<f64>() / sigmas.len() as f64),
        }
    })
    .collect();
    let k_hat = grouped(records, |r| {
        (r.task != CLUSTER_TASK).then(|| (r.d, r.method.clone(), r.task.clone(), r.k_true))
    })
    .into_iter()
    .map(|((d, method, estimator, k_true), rs)| {
        let mut counts = BTreeMap::new();
        for r in &rs {
            *counts.entry(r.k).or_insert(0) += 1;
        }
        KHatSummary {
            d,
            method,
            estimator,
            k_true,
            trials: rs.len(),
            counts,
        }
    })
    .collect();
    Summary { rand, k_hat }
}

/// Data for one trial at one dimension.
struct TrialData {
    data: DataMatrix,
    labels: Option<Vec<usize>>,
    diagnostics: Vec<String>,
}

fn load_trial(cfg: &ExperimentConfig, fixed: Option<&TrialData>, d: usize, seed: u64) -> Result<TrialData> {
    match (&cfg.source, fixed) {
        (_, Some(f)) => Ok(TrialData {
            data: f.data.clone(),
            labels: f.labels.clone(),
            diagnostics: Vec::new(),
        }),
        (DataSource::Scenario { scenario, per_class }, None) => {
            let s = sample_scenario(&ScenarioSpec::with_class_size(*scenario, d, *per_class, seed))?;
            Ok(TrialData {
                data: s.data,
                labels: Some(s.labels),
                diagnostics: s.diagnostics,
            })
        }
        (DataSource::File { .. }, None) => unreachable!("file input is loaded once up front"),
    }
}

fn distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<BTreeSet<_>>().len()
}

/// Runs every method and estimator on one trial's data.
fn run_trial(
    cfg: &ExperimentConfig,
    td: &TrialData,
    d: usize,
    trial: usize,
) -> Result<(Vec<TrialRecord>, Vec<String>)> {
    let seed = cfg.trial_seed(trial);
    let data = &td.data;
    let k_true = td.labels.as_deref().map(distinct);
    let mut records = Vec::new();
    let mut notes: Vec<String> = td.diagnostics.iter().map(|m| format!("d={d}: {m}")).collect();
    let record = |method: &Method, task: &str, k: usize, rand: Option<f64>, sigma: Option<f64>| TrialRecord {
        d,
        trial,
        seed,
        method: method.to_string(),
        task: task.to_string(),
        k_true,
        k,
        rand,
        sigma,
    };

    for (mi, method) in cfg.methods.iter().enumerate() {
        let p = method.prepare(data)?;
        let fit_seed = derive_seed(seed, 100 + mi as u64);

        if let Some(labels) = &td.labels {
            let k = cfg.cluster_k.or(k_true).unwrap_or(1);
            if k <= data.n() {
                let (assignment, sigma) = if method.algorithm == Algorithm::Spectral && k > 1 {
                    let fit = spectral(p.matrix(), &SpectralConfig::new(k, fit_seed))?;
                    (fit.assignment, Some(fit.sigma))
                } else {
                    (p.fit(k, fit_seed)?, None)
                };
                let r = rand_index(labels, assignment.labels())?;
                records.push(record(method, CLUSTER_TASK, k, Some(r), sigma));
            }
        }

        let needs_sweep = cfg.estimators.iter().any(|e| {
            matches!(e, Estimator::Kl | Estimator::Jump | Estimator::Dunn | Estimator::PenalizedDunn)
        });
        let sweep = if needs_sweep {
            Some(KSweep::from_method(&p, 1, cfg.k_max, fit_seed)?)
        } else {
            None
        };
        let mut cv: Option<(EstimatorReport, EstimatorReport)> = None;
        for &est in &cfg.estimators {
            let report = match est {
                Estimator::Kl => kl_select(sweep.as_ref().unwrap(), data.d())?,
                Estimator::Jump => {
                    let mode = match method.dissimilarity {
                        Dissimilarity::Euclidean => JumpMode::Euclid { d: data.d() },
                        Dissimilarity::Madd(_) => JumpMode::Madd,
                    };
                    jump_select(sweep.as_ref().unwrap(), cfg.jump_t, mode)?
                }
                Estimator::Dunn => dunn_select(sweep.as_ref().unwrap())?,
                Estimator::PenalizedDunn => pd_select(
                    sweep.as_ref().unwrap(),
                    PenaltySpec { lambda: cfg.pd_lambda },
                    data.d(),
                )?,
                Estimator::Gap => gap_select(data, *method, cfg.k_max, cfg.gap_refs, derive_seed(seed, 200 + mi as u64))?,
                Estimator::CvAverage | Estimator::CvVote => {
                    if cv.is_none() {
                        cv = Some(cv_select(data, *method, cfg.k_max, cfg.cv_reps, derive_seed(seed, 300 + mi as u64))?);
                    }
                    let (a, v) = cv.as_ref().unwrap();
                    if est == Estimator::CvAverage { a.clone() } else { v.clone() }
                }
            };
            notes.extend(report.diagnostics.iter().map(|m| format!("{est} on {method} at d={d}: {m}")));
            records.push(record(method, est.name(), report.k_hat, None, None));
        }
    }
    Ok((records, notes))
}

/// Runs all trials; writes the trial CSV, summary JSON and (optionally) the
/// SVG plot when an output directory is configured.
///
/// Trials run in parallel on the current rayon pool and are gathered in
/// (dimension, trial) order, so output does not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let (fixed, dims) = match &cfg.source {
        DataSource::File {
            path,
            has_header,
            label_column,
        } => {
            let ing = ingest_csv(path, *has_header, label_column.as_deref())?;
            cfg.check_sample_size(ing.data.n())?;
            let d = ing.data.d();
            let td = TrialData {
                data: ing.data,
                labels: ing.labels,
                diagnostics: Vec::new(),
            };
            (Some(td), vec![d])
        }
        DataSource::Scenario { .. } => (None, cfg.dims.clone()),
    };
    let jobs: Vec<(usize, usize)> = dims
        .iter()
        .flat_map(|&d| (0..cfg.reps).map(move |t| (d, t)))
        .collect();
    let results: Vec<(Vec<TrialRecord>, Vec<String>)> = jobs
        .par_iter()
        .map(|&(d, t)| {
            let td = load_trial(cfg, fixed.as_ref(), d, cfg.trial_seed(t))?;
            run_trial(cfg, &td, d, t)
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut diagnostics = BTreeSet::new();
    for (r, notes) in results {
        records.extend(r);
        diagnostics.extend(notes);
    }
    let report = SummaryReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        summary: summarize(&records),
        diagnostics: diagnostics.into_iter().collect(),
    };
    if let Some(dir) = &cfg.out_dir {
        write_outputs(dir, &records, &report)?;
    }
    Ok(ExperimentOutput { records, report })
}

fn write_outputs(dir: &Path, records: &[TrialRecord], report: &SummaryReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let trials = dir.join(TRIALS_FILE);
    write_trials(&trials, records)?;
    // the summary must be reproducible from what was just written
    if summarize(&read_trials(&trials)?) != report.summary {
        return Err(HarnessError::Config(format!(
            "summary does not match the records in {}",
            trials.display()
        )));
    }
    let summary = dir.join(SUMMARY_FILE);
    let json = serde_json::to_string_pretty(report).map_err(|source| HarnessError::Json {
        path: summary.clone(),
        source,
    })?;
    std::fs::write(&summary, json + "\n").map_err(|e| HarnessError::io(&summary, e))?;
    if report.config.svg {
        let plot = dir.join(PLOT_FILE);
        let svg = rand_curves_svg("Mean Rand index against dimension", &rand_series(&report.summary));
        std::fs::write(&plot, svg).map_err(|e| HarnessError::io(&plot, e))?;
    }
    Ok(())
}

/// Mean Rand against `log2 d`, one series per method.
pub fn rand_series(summary: &Summary) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for r in &summary.rand {
        let point = ((r.d as f64).log2(), r.mean_rand);
        match out.iter_mut().find(|s| s.label == r.method) {
            Some(s) => s.points.push(point),
            None => out.push(Series {
                label: r.method.clone(),
                points: vec![point],
            }),
        }
    }
    out
}

pub fn write_trials(path: &Path, records: &[TrialRecord]) -> Result<()> {
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_trials(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    reader
        .deserialize()
        .map(|r| {
            r.map_err(|source| HarnessError::Csv {
                path: path.to_path_buf(),
                source,
            })
        })
        .collect()
}

pub fn read_summary(path: &Path) -> Result<SummaryReport> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}
