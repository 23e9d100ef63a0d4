use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use madd_core::datagen::{sample_scenario, Scenario, ScenarioSpec};
use madd_core::selection::{
    cv_select, dunn_select, gap_select, jump_select, kl_select, pd_select, Estimator, JumpMode, KSweep,
    PenaltySpec,
};
use madd_core::{rand_index, DataMatrix, Dissimilarity, Method};
use madd_harness::config::{DataSource, ExperimentConfig};
use madd_harness::experiment::run_experiment;
use madd_harness::ingest::{ingest_csv, write_csv};
use madd_harness::reproduce::{reproduce, Scale, Table};
use serde_json::json;

#[derive(Parser)]
#[command(name = "madd", version, about = "Clustering with MADD dissimilarities for high-dimensional data")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Base seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled sample from a scenario and write it as CSV.
    Simulate {
        #[arg(long)]
        scenario: Scenario,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = ScenarioSpec::DESK_CLASS_SIZE)]
        per_class: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a CSV file and describe it.
    Ingest {
        #[command(flatten)]
        file: FileArgs,
        /// Rewrite the parsed data in canonical form.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Partition one data set into k clusters.
    Cluster {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value = "avgl:rho0")]
        method: Method,
        #[arg(long)]
        k: usize,
    },
    /// Estimate the number of clusters in one data set.
    EstimateK {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value = "avgl:rho0")]
        method: Method,
        /// Comma-separated: kl, gap, jump, cv-a, cv-v, dunn, pd.
        #[arg(long, value_delimiter = ',', default_value = "dunn,kl,jump,pd")]
        estimators: Vec<Estimator>,
        #[arg(long, default_value_t = KSweep::DEFAULT_K_MAX)]
        k_max: usize,
        #[arg(long, default_value_t = 1.0)]
        jump_t: f64,
        #[arg(long, default_value_t = 0.015)]
        pd_lambda: f64,
        #[arg(long, default_value_t = 10)]
        gap_refs: usize,
        #[arg(long, default_value_t = 10)]
        cv_reps: usize,
    },
    /// Run a repeated-trial experiment from a JSON config or from flags.
    Run(RunArgs),
    /// Regenerate one of the preset result tables.
    Reproduce {
        /// fig2, t1, t2, t3 or t4.
        table: Table,
        #[arg(long, default_value = "desk")]
        scale: Scale,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct FileArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    no_header: bool,
    /// Header name (or 1-based index without a header) of the label column.
    #[arg(long)]
    label_column: Option<String>,
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long, conflicts_with = "scenario")]
    input: Option<PathBuf>,
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, requires = "dim")]
    scenario: Option<Scenario>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = ScenarioSpec::DESK_CLASS_SIZE)]
    per_class: usize,
}

impl SourceArgs {
    fn load(&self, seed: u64) -> Result<(DataMatrix, Option<Vec<usize>>)> {
        match (&self.input, self.scenario) {
            (Some(path), _) => {
                let ing = ingest_csv(path, !self.no_header, self.label_column.as_deref())?;
                Ok((ing.data, ing.labels))
            }
            (None, Some(s)) => {
                let d = self.dim.context("--dim is required with --scenario")?;
                let sample = sample_scenario(&ScenarioSpec::with_class_size(s, d, self.per_class, seed))?;
                for m in &sample.diagnostics {
                    eprintln!("note: {m}");
                }
                Ok((sample.data, Some(sample.labels)))
            }
            (None, None) => bail!("give either --input or --scenario"),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; the flags below are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "input")]
    scenario: Option<Scenario>,
    #[arg(long, default_value_t = ScenarioSpec::DESK_CLASS_SIZE)]
    per_class: usize,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',')]
    estimators: Vec<Estimator>,
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = KSweep::DEFAULT_K_MAX)]
    k_max: usize,
    #[arg(long)]
    cluster_k: Option<usize>,
    #[arg(long)]
    svg: bool,
    /// Output directory (overrides the config's).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, seed: Option<u64>) -> Result<ExperimentConfig> {
        let mut cfg = if let Some(path) = &self.config {
            ExperimentConfig::from_json_file(path)?
        } else {
            let source = match (&self.scenario, &self.input) {
                (Some(s), None) => DataSource::Scenario {
                    scenario: *s,
                    per_class: self.per_class,
                },
                (None, Some(path)) => DataSource::File {
                    path: path.clone(),
                    has_header: !self.no_header,
                    label_column: self.label_column.clone(),
                },
                _ => bail!("give --config, --scenario or --input"),
            };
            let mut cfg = ExperimentConfig::scenario(Scenario::A, self.dims.clone(), self.methods.clone());
            cfg.source = source;
            cfg.estimators = self.estimators.clone();
            cfg.reps = self.reps;
            cfg.k_max = self.k_max;
            cfg.cluster_k = self.cluster_k;
            cfg.svg = self.svg;
            cfg
        };
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if self.out.is_some() {
            cfg.out_dir = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(1);
    match cli.command {
        Command::Simulate {
            scenario,
            dim,
            per_class,
            out,
        } => {
            let sample = sample_scenario(&ScenarioSpec::with_class_size(scenario, dim, per_class, seed))?;
            for m in &sample.diagnostics {
                eprintln!("note: {m}");
            }
            write_csv(&out, &sample.data, Some(&sample.labels))?;
            eprintln!("wrote {} x {} sample to {}", sample.data.n(), sample.data.d(), out.display());
        }
        Command::Ingest { file, export } => {
            let ing = ingest_csv(&file.input, !file.no_header, file.label_column.as_deref())?;
            let sizes = ing.labels.as_ref().map(|l| {
                ing.classes
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), l.iter().filter(|&&x| x == i + 1).count()))
                    .collect::<Vec<_>>()
            });
            if let Some(path) = export {
                write_csv(&path, &ing.data, ing.labels.as_deref())?;
            }
            print_json(&json!({
                "n": ing.data.n(),
                "d": ing.data.d(),
                "classes": sizes,
            }))?;
        }
        Command::Cluster { source, method, k } => {
            let (data, labels) = source.load(seed)?;
            let prepared = method.prepare(&data)?;
            let assignment = prepared.fit(k, seed)?;
            let rand = labels
                .as_ref()
                .map(|t| rand_index(t, assignment.labels()))
                .transpose()?;
            print_json(&json!({
                "method": method.to_string(),
                "k": k,
                "rand": rand,
                "sizes": assignment.sizes(),
                "labels": assignment.labels(),
            }))?;
        }
        Command::EstimateK {
            source,
            method,
            estimators,
            k_max,
            jump_t,
            pd_lambda,
            gap_refs,
            cv_reps,
        } => {
            let (data, labels) = source.load(seed)?;
            let prepared = method.prepare(&data)?;
            let sweep = KSweep::from_method(&prepared, 1, k_max, seed)?;
            let mut reports = Vec::new();
            for est in estimators {
                let r = match est {
                    Estimator::Kl => kl_select(&sweep, data.d())?,
                    Estimator::Jump => {
                        let mode = match method.dissimilarity {
                            Dissimilarity::Euclidean => JumpMode::Euclid { d: data.d() },
                            Dissimilarity::Madd(_) => JumpMode::Madd,
                        };
                        jump_select(&sweep, jump_t, mode)?
                    }
                    Estimator::Dunn => dunn_select(&sweep)?,
                    Estimator::PenalizedDunn => pd_select(&sweep, PenaltySpec { lambda: pd_lambda }, data.d())?,
                    Estimator::Gap => gap_select(&data, method, k_max, gap_refs, seed)?,
                    Estimator::CvAverage => cv_select(&data, method, k_max, cv_reps, seed)?.0,
                    Estimator::CvVote => cv_select(&data, method, k_max, cv_reps, seed)?.1,
                };
                reports.push(r);
            }
            let k_true = labels.map(|l| l.iter().collect::<std::collections::BTreeSet<_>>().len());
            print_json(&json!({
                "method": method.to_string(),
                "k_true": k_true,
                "estimates": reports,
            }))?;
        }
        Command::Run(args) => {
            let cfg = args.config(cli.seed)?;
            let out = run_experiment(&cfg)?;
            print_json(&serde_json::to_value(&out.report.summary)?)?;
        }
        Command::Reproduce { table, scale, out } => {
            let reports = reproduce(table, scale, &out, seed)?;
            eprintln!(
                "wrote {} ({} experiments) under {}",
                table,
                reports.len(),
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("could not size the worker pool")?;
    }
    run(cli)
}
