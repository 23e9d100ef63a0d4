//! Preset experiments behind the `reproduce` command.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use madd_core::datagen::Scenario;
use madd_core::selection::Estimator;
use madd_core::Method;

use crate::config::{DataSource, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::experiment::{run_experiment, SummaryReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// Rand index against dimension for Examples A and B.
    Fig2,
    /// Rand indices for Examples 1 to 6.
    T1,
    /// Rand indices for Examples 7 and 8.
    T2,
    /// Estimated number of clusters for Examples 1 to 6.
    T3,
    /// Estimated number of clusters for Examples 7 and 8.
    T4,
}

impl Table {
    pub const ALL: [Table; 5] = [Table::Fig2, Table::T1, Table::T2, Table::T3, Table::T4];

    pub fn name(self) -> &'static str {
        match self {
            Table::Fig2 => "fig2",
            Table::T1 => "t1",
            Table::T2 => "t2",
            Table::T3 => "t3",
            Table::T4 => "t4",
        }
    }

    fn estimates_k(self) -> bool {
        matches!(self, Table::T3 | Table::T4)
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Table {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Table::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| HarnessError::Config(format!("unknown table '{s}' (fig2, t1, t2, t3, t4)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// 10 trials of 30 points per class.
    Desk,
    /// 100 trials of 50 points per class; slow.
    Full,
}

impl FromStr for Scale {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "desk" => Ok(Scale::Desk),
            "full" => Ok(Scale::Full),
            _ => Err(HarnessError::Config(format!("unknown scale '{s}' (desk, full)"))),
        }
    }
}

fn methods(names: &[&str]) -> Vec<Method> {
    names.iter().map(|m| m.parse().expect("preset method names parse")).collect()
}

/// The experiments a table is built from, named by scenario tag.
pub fn plan(table: Table, scale: Scale, seed: u64) -> Vec<(String, ExperimentConfig)> {
    let (reps, per_class, resamples) = match scale {
        Scale::Desk => (10, 30, 10),
        Scale::Full => (100, 50, 100),
    };
    let grid = vec![100, 200, 500];
    let (scenarios, dims, method_names, estimators, svg): (Vec<Scenario>, Vec<usize>, Vec<&str>, Vec<Estimator>, bool) =
        match table {
            Table::Fig2 => (
                vec![Scenario::A, Scenario::B],
                (1..=11).map(|r| 1usize << r).collect(),
                vec!["avgl:euclid", "km:euclid", "spectral:euclid", "avgl:rho0", "km:rho0", "spectral:rho0"],
                vec![],
                true,
            ),
            Table::T1 => (
                vec![Scenario::Ex1, Scenario::Ex2, Scenario::Ex3, Scenario::Ex4, Scenario::Ex5, Scenario::Ex6],
                grid,
                vec!["avgl:euclid", "avgl:rho0", "km:euclid", "km:rho0", "spectral:euclid", "spectral:rho0"],
                vec![],
                false,
            ),
            Table::T2 => (
                vec![Scenario::Ex7, Scenario::Ex8, Scenario::Ex8Cauchy],
                grid,
                vec![
                    "avgl:euclid", "avgl:rho0", "avgl:rho1", "avgl:rho2", "km:euclid", "km:rho0", "km:rho1",
                    "km:rho2", "spectral:euclid", "spectral:rho0", "spectral:rho1", "spectral:rho2",
                ],
                vec![],
                false,
            ),
            Table::T3 => (
                vec![Scenario::Ex1, Scenario::Ex2, Scenario::Ex3, Scenario::Ex4, Scenario::Ex5, Scenario::Ex6],
                vec![500],
                vec!["avgl:rho0", "km:rho0"],
                Estimator::ALL.to_vec(),
                false,
            ),
            Table::T4 => (
                vec![Scenario::Ex7, Scenario::Ex8],
                vec![500],
                vec!["avgl:rho0", "avgl:rho1", "avgl:rho2", "km:rho0", "km:rho1", "km:rho2"],
                vec![Estimator::Dunn, Estimator::Kl, Estimator::Jump, Estimator::CvAverage, Estimator::CvVote],
                false,
            ),
        };
    scenarios
        .into_iter()
        .map(|s| {
            let mut cfg = ExperimentConfig::scenario(s, dims.clone(), methods(&method_names));
            cfg.source = DataSource::Scenario {
                scenario: s,
                per_class,
            };
            cfg.estimators = estimators.clone();
            // the k-estimation tables stop at k = 10 for Examples 7 and 8
            if table == Table::T4 {
                cfg.k_max = 10;
            }
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.gap_refs = resamples;
            cfg.cv_reps = resamples;
            cfg.svg = svg;
            (s.tag().to_string(), cfg)
        })
        .collect()
}

/// Runs a table's experiments under `out/<table>/<scenario>/` and writes the
/// combined `out/<table>.csv`.
pub fn reproduce(table: Table, scale: Scale, out: &Path, seed: u64) -> Result<Vec<(String, SummaryReport)>> {
    let mut reports = Vec::new();
    for (name, mut cfg) in plan(table, scale, seed) {
        cfg.out_dir = Some(out.join(table.name()).join(&name));
        reports.push((name, run_experiment(&cfg)?.report));
    }
    let path = out.join(format!("{}.csv", table.name()));
    write_table(&path, table, &reports)?;
    Ok(reports)
}

fn write_table(path: &Path, table: Table, reports: &[(String, SummaryReport)]) -> Result<()> {
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    if table.estimates_k() {
        w.write_record(["example", "d", "method", "estimator", "k_true", "k", "count"])
            .map_err(csv_err)?;
        for (name, report) in reports {
            for row in &report.summary.k_hat {
                for k in 1..=report.config.k_max {
                    let count = row.counts.get(&k).copied().unwrap_or(0);
                    let k_true = row.k_true.map(|k| k.to_string()).unwrap_or_default();
                    w.write_record([
                        name.as_str(),
                        &row.d.to_string(),
                        &row.method,
                        &row.estimator,
                        &k_true,
                        &k.to_string(),
                        &count.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
    } else {
        w.write_record(["example", "d", "method", "trials", "mean_rand", "sd_rand", "mean_sigma"])
            .map_err(csv_err)?;
        for (name, report) in reports {
            for row in &report.summary.rand {
                w.write_record([
                    name.as_str(),
                    &row.d.to_string(),
                    &row.method,
                    &row.trials.to_string(),
                    &format!("{:.4}", row.mean_rand),
                    &format!("{:.4}", row.sd_rand),
                    &row.mean_sigma.map(|s| format!("{s:.4}")).unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}
