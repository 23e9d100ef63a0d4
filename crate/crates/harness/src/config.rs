//! Experiment configuration, loadable from JSON.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use madd_core::datagen::{Scenario, ScenarioSpec};
use madd_core::selection::Estimator;
use madd_core::Method;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HarnessError, Result};

/// Where each trial's data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataSource {
    /// A fresh sample per trial and dimension.
    Scenario {
        #[serde(with = "as_text")]
        scenario: Scenario,
        #[serde(default = "default_per_class")]
        per_class: usize,
    },
    /// One fixed data set; trials differ only in algorithm seeds.
    File {
        path: PathBuf,
        #[serde(default = "default_true")]
        has_header: bool,
        #[serde(default)]
        label_column: Option<String>,
    },
}

fn default_per_class() -> usize {
    ScenarioSpec::DESK_CLASS_SIZE
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: DataSource,
    /// Methods in `algo:dissimilarity` form, each scored and used as an
    /// estimator base.
    #[serde(with = "as_text_vec")]
    pub methods: Vec<Method>,
    #[serde(default, with = "as_text_vec")]
    pub estimators: Vec<Estimator>,
    /// Number of clusters for Rand scoring; defaults to the true count.
    #[serde(default)]
    pub cluster_k: Option<usize>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    /// Dimensions to sweep; ignored for file input.
    #[serde(default)]
    pub dims: Vec<usize>,
    pub reps: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_jump_t")]
    pub jump_t: f64,
    #[serde(default = "default_lambda")]
    pub pd_lambda: f64,
    #[serde(default = "default_resamples")]
    pub gap_refs: usize,
    #[serde(default = "default_resamples")]
    pub cv_reps: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
}

fn default_k_max() -> usize {
    madd_core::selection::KSweep::DEFAULT_K_MAX
}

fn default_seed() -> u64 {
    1
}

fn default_jump_t() -> f64 {
    1.0
}

fn default_lambda() -> f64 {
    0.015
}

fn default_resamples() -> usize {
    10
}

impl ExperimentConfig {
    /// Desk-scale defaults for a generated scenario.
    pub fn scenario(scenario: Scenario, dims: Vec<usize>, methods: Vec<Method>) -> Self {
        Self {
            source: DataSource::Scenario {
                scenario,
                per_class: default_per_class(),
            },
            methods,
            estimators: Vec::new(),
            cluster_k: None,
            k_max: default_k_max(),
            dims,
            reps: 10,
            seed: default_seed(),
            jump_t: default_jump_t(),
            pd_lambda: default_lambda(),
            gap_refs: default_resamples(),
            cv_reps: default_resamples(),
            out_dir: None,
            svg: false,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Seed of trial `t`: consecutive from the base seed, so trial `t` never
    /// depends on how many trials run.
    pub fn trial_seed(&self, t: usize) -> u64 {
        self.seed.wrapping_add(t as u64)
    }

    /// Checks everything that can be checked without loading data.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        if self.k_max < 2 {
            return bad(format!("k_max must be at least 2, got {}", self.k_max));
        }
        if self.cluster_k == Some(0) {
            return bad("cluster_k must be positive".into());
        }
        if !(self.jump_t > 0.0) {
            return bad(format!("jump_t must be positive, got {}", self.jump_t));
        }
        if !(self.pd_lambda > 0.0) {
            return bad(format!("pd_lambda must be positive, got {}", self.pd_lambda));
        }
        if self.estimators.contains(&Estimator::Gap) && self.gap_refs < 2 {
            return bad("gap_refs must be at least 2".into());
        }
        let cv = self
            .estimators
            .iter()
            .any(|e| matches!(e, Estimator::CvAverage | Estimator::CvVote));
        if cv && self.cv_reps == 0 {
            return bad("cv_reps must be at least 1".into());
        }
        if let DataSource::Scenario { scenario, per_class } = &self.source {
            if self.dims.is_empty() {
                return bad("a scenario source needs at least one dimension".into());
            }
            if let Some(&d) = self.dims.iter().find(|&&d| d < 2) {
                return bad(format!("dimension must be at least 2, got {d}"));
            }
            let n = ScenarioSpec::with_class_size(*scenario, 2, *per_class, 0).n();
            self.check_sample_size(n)?;
        }
        Ok(())
    }

    /// Checks that every estimator is defined for a sample of `n` points.
    pub fn check_sample_size(&self, n: usize) -> Result<()> {
        if !self.estimators.is_empty() && self.k_max + 1 > n {
            return Err(HarnessError::Config(format!(
                "k_max={} needs at least {} observations, have {n}",
                self.k_max,
                self.k_max + 1
            )));
        }
        let cv = self
            .estimators
            .iter()
            .any(|e| matches!(e, Estimator::CvAverage | Estimator::CvVote));
        if cv {
            let m = 5 * (n / 15);
            if self.k_max > m {
                return Err(HarnessError::Config(format!(
                    "cross-validation fits {m} points per half, fewer than k_max={}",
                    self.k_max
                )));
            }
        }
        Ok(())
    }
}

/// Serde through `Display`/`FromStr`.
pub(crate) mod as_text {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> std::result::Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod as_text_vec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, T, D>(d: D) -> std::result::Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig::scenario(Scenario::Ex3, vec![100], vec!["avgl:rho0".parse().unwrap()])
    }

    #[test]
    fn json_round_trip() {
        let mut cfg = base();
        cfg.estimators = vec![Estimator::Dunn, Estimator::CvVote];
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"avgl:rho0\"") && text.contains("\"cv-v\"") && text.contains("\"ex3\""));
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn minimal_json_gets_defaults() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"source": {"kind": "scenario", "scenario": "ex6"}, "methods": ["km:rho0"], "dims": [200], "reps": 3}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.k_max, 12);
        assert_eq!(cfg.source, DataSource::Scenario { scenario: Scenario::Ex6, per_class: 30 });
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = base();
        cfg.reps = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = base();
        cfg.dims = vec![1];
        assert!(cfg.validate().is_err());
        let mut cfg = base();
        cfg.methods.clear();
        assert!(cfg.validate().is_err());
        // n = 6 cannot support k up to 12
        let mut cfg = base();
        cfg.source = DataSource::Scenario { scenario: Scenario::Ex3, per_class: 2 };
        cfg.estimators = vec![Estimator::Kl];
        assert!(cfg.validate().is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"source": {"kind": "scenario", "scenario": "ex6"}, "methods": ["km:bogus"], "reps": 1}"#
        )
        .is_err());
    }

    #[test]
    fn trial_seeds_are_consecutive() {
        let cfg = base();
        assert_eq!((0..3).map(|t| cfg.trial_seed(t)).collect::<Vec<_>>(), vec![1, 2, 3]);
    }
}
