//! Estimating the number of clusters.
//!
//! Sweep-based estimators ([`kl_select`], [`jump_select`], [`dunn_select`],
//! [`pd_select`]) read a precomputed [`KSweep`]; [`gap_select`] and
//! [`cv_select`] refit the base method on resampled data. Every argmax and
//! argmin breaks ties toward the smallest `k`.

mod resampling;

pub use resampling::{cv_select, gap_rule, gap_select};

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterAssignment;
use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};
use crate::method::PreparedMethod;

/// `W = sum_j (2|C_j|)^-1 sum_{z,w in C_j} D(z,w)^2` over ordered pairs.
pub fn within_dispersion(d: &DissimilarityMatrix, a: &ClusterAssignment) -> Result<f64> {
    check_sizes(d, a)?;
    let sizes = a.sizes();
    let mut within = vec![0.0; a.k()];
    let labels = a.labels();
    for i in 0..d.n() {
        let row = d.row(i);
        for j in (i + 1)..d.n() {
            if labels[i] == labels[j] {
                within[labels[i] - 1] += row[j] * row[j];
            }
        }
    }
    Ok(within.iter().zip(&sizes).map(|(w, &s)| w / s as f64).sum())
}

fn check_sizes(d: &DissimilarityMatrix, a: &ClusterAssignment) -> Result<()> {
    if d.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            got: a.n(),
        });
    }
    Ok(())
}

/// Ingredients of the Dunn ratio for one partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DunnParts {
    /// Smallest mean between-cluster dissimilarity; `NaN` when `k = 1`.
    pub b_circ: f64,
    /// Largest mean within-cluster dissimilarity.
    pub w_circ: f64,
    /// Clusters with one member, whose within value is taken as 0.
    pub singletons: usize,
}

impl DunnParts {
    pub fn ratio(&self) -> f64 {
        if self.w_circ > 0.0 {
            self.b_circ / self.w_circ
        } else {
            f64::INFINITY
        }
    }
}

pub fn dunn_parts(d: &DissimilarityMatrix, a: &ClusterAssignment) -> Result<DunnParts> {
    check_sizes(d, a)?;
    let k = a.k();
    let labels = a.labels();
    // sums[p][q] over unordered pairs with labels p <= q
    let mut sums = vec![vec![0.0; k]; k];
    for i in 0..d.n() {
        let row = d.row(i);
        for j in (i + 1)..d.n() {
            let (p, q) = (labels[i] - 1, labels[j] - 1);
            sums[p.min(q)][p.max(q)] += row[j];
        }
    }
    let sizes = a.sizes();
    let mut w_circ: f64 = 0.0;
    let mut singletons = 0;
    for (p, &s) in sizes.iter().enumerate() {
        if s < 2 {
            singletons += 1;
            continue;
        }
        let pairs = (s * (s - 1) / 2) as f64;
        w_circ = w_circ.max(sums[p][p] / pairs);
    }
    let mut b_circ = f64::NAN;
    for p in 0..k {
        for q in (p + 1)..k {
            let between = sums[p][q] / (sizes[p] * sizes[q]) as f64;
            if b_circ.is_nan() || between < b_circ {
                b_circ = between;
            }
        }
    }
    Ok(DunnParts {
        b_circ,
        w_circ,
        singletons,
    })
}

/// Dunn ratio `min_{i<j} mean D(C_i, C_j) / max_i mean D within C_i`;
/// `+inf` when every cluster has zero spread.
pub fn dunn_index(d: &DissimilarityMatrix, a: &ClusterAssignment) -> Result<f64> {
    if a.k() < 2 {
        return Err(Error::InvalidK { k: a.k(), max: a.n() });
    }
    Ok(dunn_parts(d, a)?.ratio())
}

/// One level of a [`KSweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepLevel {
    pub k: usize,
    pub assignment: ClusterAssignment,
    pub w: f64,
    pub dunn: DunnParts,
}

/// Partitions of one sample for consecutive `k`, all from one base method.
///
/// Estimators consider `k_min..=k_max`; a level at `k_max + 1` is kept when
/// the sample is large enough, since the KL ratio looks one step ahead.
#[derive(Debug, Clone, PartialEq)]
pub struct KSweep {
    k_min: usize,
    k_max: usize,
    levels: Vec<SweepLevel>,
}

impl KSweep {
    pub const DEFAULT_K_MAX: usize = 12;

    /// Builds the sweep from an arbitrary partition source.
    pub fn from_fn<F>(d: &DissimilarityMatrix, k_min: usize, k_max: usize, mut fit: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<ClusterAssignment>,
    {
        let n = d.n();
        if k_min == 0 || k_min > k_max || k_max > n {
            return Err(Error::InvalidParameter(format!(
                "k range {k_min}..={k_max} invalid for n={n}"
            )));
        }
        let top = (k_max + 1).min(n);
        let mut levels = Vec::with_capacity(top - k_min + 1);
        for k in k_min..=top {
            let assignment = fit(k)?;
            if assignment.k() != k || assignment.n() != n {
                return Err(Error::InvalidParameter(format!(
                    "partition for k={k} has {} clusters over {} points",
                    assignment.k(),
                    assignment.n()
                )));
            }
            levels.push(SweepLevel {
                k,
                w: within_dispersion(d, &assignment)?,
                dunn: dunn_parts(d, &assignment)?,
                assignment,
            });
        }
        Ok(Self { k_min, k_max, levels })
    }

    /// Sweep of a prepared method over its own matrix; randomized methods get
    /// seed `seed` at every `k`.
    pub fn from_method(p: &PreparedMethod<'_>, k_min: usize, k_max: usize, seed: u64) -> Result<Self> {
        Self::from_fn(p.matrix(), k_min, k_max, |k| p.fit(k, seed))
    }

    pub fn k_min(&self) -> usize {
        self.k_min
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn level(&self, k: usize) -> Option<&SweepLevel> {
        k.checked_sub(self.k_min).and_then(|i| self.levels.get(i))
    }

    /// Within dispersion at `k`, if swept.
    pub fn w(&self, k: usize) -> Option<f64> {
        self.level(k).map(|l| l.w)
    }

    pub fn levels(&self) -> &[SweepLevel] {
        &self.levels
    }

    fn require(&self, k: usize, what: &str) -> Result<&SweepLevel> {
        self.level(k).ok_or_else(|| {
            Error::InvalidParameter(format!("{what} needs k={k}, sweep covers {}..", self.k_min))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Kl,
    Gap,
    Jump,
    #[serde(rename = "cv-a", alias = "cv-average")]
    CvAverage,
    #[serde(rename = "cv-v", alias = "cv-vote")]
    CvVote,
    Dunn,
    #[serde(rename = "pd", alias = "penalized-dunn")]
    PenalizedDunn,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Kl => "kl",
            Estimator::Gap => "gap",
            Estimator::Jump => "jump",
            Estimator::CvAverage => "cv-a",
            Estimator::CvVote => "cv-v",
            Estimator::Dunn => "dunn",
            Estimator::PenalizedDunn => "pd",
        }
    }

    pub const ALL: [Estimator; 7] = [
        Estimator::Kl,
        Estimator::Gap,
        Estimator::Jump,
        Estimator::CvAverage,
        Estimator::CvVote,
        Estimator::Dunn,
        Estimator::PenalizedDunn,
    ];
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == key)
            .or(match key.as_str() {
                "penalized-dunn" => Some(Estimator::PenalizedDunn),
                "cv-average" => Some(Estimator::CvAverage),
                "cv-vote" => Some(Estimator::CvVote),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidParameter(format!("unknown estimator '{s}'")))
    }
}

/// Output of one estimator: its statistic over `ks` and the selected `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub estimator: Estimator,
    pub ks: Vec<usize>,
    pub statistic: Vec<f64>,
    pub k_hat: usize,
    /// Per-k spread (Gap's `s_k`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spread: Vec<f64>,
    /// Per-repetition minimizers (CV).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub minimizers: Vec<usize>,
    pub diagnostics: Vec<String>,
}

impl EstimatorReport {
    fn new(estimator: Estimator, ks: Vec<usize>, statistic: Vec<f64>, k_hat: usize) -> Self {
        Self {
            estimator,
            ks,
            statistic,
            k_hat,
            spread: Vec::new(),
            minimizers: Vec::new(),
            diagnostics: Vec::new(),
        }
    }
}

/// Index of the first maximum; `NaN` never wins.
pub(crate) fn first_argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] || (v[best].is_nan() && !x.is_nan()) {
            best = i;
        }
    }
    best
}

pub(crate) fn first_argmin(v: &[f64]) -> usize {
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    first_argmax(&neg)
}

/// `KL(k) = |Diff(k) / Diff(k+1)|` with
/// `Diff(k) = (k-1)^(2/d) W_{k-1} - k^(2/d) W_k`, maximized over `2..=K`.
pub fn kl_select(sweep: &KSweep, d: usize) -> Result<EstimatorReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let k_max = sweep.k_max();
    if k_max < 2 {
        return Err(Error::InvalidK { k: k_max, max: 2 });
    }
    let p = 2.0 / d as f64;
    let diff = |k: usize| -> Result<f64> {
        let prev = sweep.require(k - 1, "KL")?.w;
        let cur = sweep.require(k, "KL")?.w;
        Ok(((k - 1) as f64).powf(p) * prev - (k as f64).powf(p) * cur)
    };
    let mut diags = Vec::new();
    let ks: Vec<usize> = (2..=k_max).collect();
    let mut stat = Vec::with_capacity(ks.len());
    for &k in &ks {
        let (num, den) = (diff(k)?, diff(k + 1)?);
        let v = if den != 0.0 {
            (num / den).abs()
        } else if num != 0.0 {
            diags.push(format!("k={k}: zero denominator, statistic set to +inf"));
            f64::INFINITY
        } else {
            diags.push(format!("k={k}: 0/0, statistic set to 0"));
            0.0
        };
        stat.push(v);
    }
    let k_hat = ks[first_argmax(&stat)];
    let mut r = EstimatorReport::new(Estimator::Kl, ks, stat, k_hat);
    r.diagnostics = diags;
    Ok(r)
}

/// How the Jump statistic turns `W_k` into a distortion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpMode {
    /// `d_k = W_k / d` for Euclidean sweeps in dimension `d`.
    Euclid { d: usize },
    /// `d_k = W_k` for MADD sweeps.
    Madd,
}

/// `Jump(k) = d_k^-t - d_{k-1}^-t` with `d_0^-t = 0`, maximized over `1..=K`.
pub fn jump_select(sweep: &KSweep, t: f64, mode: JumpMode) -> Result<EstimatorReport> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("jump power must be positive, got {t}")));
    }
    if sweep.k_min() != 1 {
        return Err(Error::InvalidParameter("jump needs a sweep starting at k=1".into()));
    }
    let scale = match mode {
        JumpMode::Euclid { d } if d > 0 => d as f64,
        JumpMode::Euclid { .. } => {
            return Err(Error::InvalidParameter("dimension must be positive".into()))
        }
        JumpMode::Madd => 1.0,
    };
    let mut diags = Vec::new();
    let ks: Vec<usize> = (1..=sweep.k_max()).collect();
    let mut powered = Vec::with_capacity(ks.len());
    for &k in &ks {
        let dk = sweep.require(k, "jump")?.w / scale;
        powered.push(if dk > 0.0 {
            dk.powf(-t)
        } else {
            diags.push(format!("k={k}: zero distortion, statistic set to +inf"));
            f64::INFINITY
        });
    }
    let stat: Vec<f64> = powered
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let prev = if i == 0 { 0.0 } else { powered[i - 1] };
            if v.is_infinite() && prev.is_infinite() {
                // inf - inf: the step adds nothing finite
                0.0
            } else {
                v - prev
            }
        })
        .collect();
    let k_hat = ks[first_argmax(&stat)];
    if k_hat == sweep.k_max() {
        diags.push(format!("selected the largest candidate k={k_hat}"));
    }
    let mut r = EstimatorReport::new(Estimator::Jump, ks, stat, k_hat);
    r.diagnostics = diags;
    Ok(r)
}

/// Dunn ratio maximized over `2..=K`.
pub fn dunn_select(sweep: &KSweep) -> Result<EstimatorReport> {
    let mut diags = Vec::new();
    let ks: Vec<usize> = (2.max(sweep.k_min())..=sweep.k_max()).collect();
    if ks.is_empty() {
        return Err(Error::InvalidK { k: sweep.k_max(), max: 2 });
    }
    let mut stat = Vec::with_capacity(ks.len());
    for &k in &ks {
        let parts = sweep.require(k, "Dunn")?.dunn;
        dunn_diagnostics(k, &parts, &mut diags);
        stat.push(parts.ratio());
    }
    let k_hat = ks[first_argmax(&stat)];
    let mut r = EstimatorReport::new(Estimator::Dunn, ks, stat, k_hat);
    r.diagnostics = diags;
    Ok(r)
}

fn dunn_diagnostics(k: usize, parts: &DunnParts, diags: &mut Vec<String>) {
    if parts.singletons > 0 {
        diags.push(format!("k={k}: {} singleton cluster(s) with zero spread", parts.singletons));
    }
    if parts.w_circ == 0.0 {
        diags.push(format!("k={k}: zero within-cluster spread, ratio set to +inf"));
    }
}

/// Dunn penalty `zeta(d) = lambda * ln d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltySpec {
    pub lambda: f64,
}

impl Default for PenaltySpec {
    fn default() -> Self {
        Self { lambda: 0.015 }
    }
}

impl PenaltySpec {
    pub fn zeta(&self, d: usize) -> f64 {
        self.lambda * (d as f64).ln()
    }
}

/// `PD(k) = B_k / W_k - k * zeta(d)` maximized over `1..=K`. At `k = 1` the
/// between term borrows `B_2` and the within term is the mean dissimilarity
/// of the whole sample.
pub fn pd_select(sweep: &KSweep, penalty: PenaltySpec, d: usize) -> Result<EstimatorReport> {
    if !(penalty.lambda > 0.0) {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("penalty needs d >= 2, got {d}")));
    }
    if sweep.k_min() != 1 || sweep.k_max() < 2 {
        return Err(Error::InvalidParameter("PD needs a sweep covering k=1 and k=2".into()));
    }
    let zeta = penalty.zeta(d);
    let b2 = sweep.require(2, "PD")?.dunn.b_circ;
    let mut diags = Vec::new();
    let ks: Vec<usize> = (1..=sweep.k_max()).collect();
    let mut stat = Vec::with_capacity(ks.len());
    for &k in &ks {
        let mut parts = sweep.require(k, "PD")?.dunn;
        if k == 1 {
            parts.b_circ = b2;
        }
        dunn_diagnostics(k, &parts, &mut diags);
        stat.push(parts.ratio() - k as f64 * zeta);
    }
    let k_hat = ks[first_argmax(&stat)];
    let mut r = EstimatorReport::new(Estimator::PenalizedDunn, ks, stat, k_hat);
    r.diagnostics = diags;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissimilarity::MatrixKind;

    fn mat(rows: &[Vec<f64>]) -> DissimilarityMatrix {
        DissimilarityMatrix::from_rows(rows, MatrixKind::MaddRho).unwrap()
    }

    /// Sweep whose only content is a W series; Dunn parts are filler.
    fn w_sweep(k_min: usize, w: &[f64]) -> KSweep {
        let n = k_min + w.len() + 1;
        let levels = w
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let k = k_min + i;
                let raw: Vec<usize> = (0..n).map(|j| j.min(k - 1)).collect();
                SweepLevel {
                    k,
                    assignment: ClusterAssignment::from_raw(&raw),
                    w,
                    dunn: DunnParts {
                        b_circ: 1.0,
                        w_circ: 1.0,
                        singletons: 0,
                    },
                }
            })
            .collect();
        KSweep {
            k_min,
            k_max: k_min + w.len() - 2,
            levels,
        }
    }

    #[test]
    fn dispersion_examples() {
        let d = mat(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let one = ClusterAssignment::from_raw(&[0, 0]);
        assert_eq!(within_dispersion(&d, &one).unwrap(), 0.5);
        let singles = ClusterAssignment::from_raw(&[0, 1]);
        assert_eq!(within_dispersion(&d, &singles).unwrap(), 0.0);
    }

    #[test]
    fn dunn_hand_example() {
        let d = mat(&[vec![0.0, 0.1, 1.0], vec![0.1, 0.0, 1.2], vec![1.0, 1.2, 0.0]]);
        let a = ClusterAssignment::from_raw(&[0, 0, 1]);
        let parts = dunn_parts(&d, &a).unwrap();
        assert!((parts.b_circ - 1.1).abs() < 1e-12);
        assert_eq!(parts.w_circ, 0.1);
        assert_eq!(parts.singletons, 1);
        assert!((dunn_index(&d, &a).unwrap() - 11.0).abs() < 1e-9);
        let scaled = d.scaled(7.5).unwrap();
        assert!((dunn_index(&scaled, &a).unwrap() - 11.0).abs() < 1e-9);
    }

    #[test]
    fn dunn_duplicates_infinite() {
        let d = mat(&[
            vec![0.0, 0.0, 2.0, 2.0],
            vec![0.0, 0.0, 2.0, 2.0],
            vec![2.0, 2.0, 0.0, 0.0],
            vec![2.0, 2.0, 0.0, 0.0],
        ]);
        let a = ClusterAssignment::from_raw(&[0, 0, 1, 1]);
        assert_eq!(dunn_index(&d, &a).unwrap(), f64::INFINITY);
        assert!(dunn_index(&d, &ClusterAssignment::from_raw(&[0; 4])).is_err());
    }

    #[test]
    fn kl_picks_big_drop() {
        let sweep = w_sweep(1, &[10.0, 10.0, 1.0, 0.9, 0.85, 0.82, 0.8]);
        let r = kl_select(&sweep, 500).unwrap();
        assert_eq!(r.k_hat, 3);
        assert_eq!(r.ks.first(), Some(&2));
    }

    #[test]
    fn kl_plateau_is_finite() {
        let sweep = w_sweep(1, &[4.0; 8]);
        let r = kl_select(&sweep, 10).unwrap();
        assert!(r.statistic.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn kl_zero_denominator_flagged() {
        let sweep = w_sweep(1, &[4.0, 2.0, 0.0, 0.0, 0.0]);
        let r = kl_select(&sweep, 1_000_000).unwrap();
        assert!(r.statistic.iter().any(|v| v.is_infinite()));
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn jump_hand_example() {
        let sweep = w_sweep(1, &[4.0, 1.0, 0.5, 0.4]);
        let r = jump_select(&sweep, 1.0, JumpMode::Madd).unwrap();
        assert_eq!(r.statistic, vec![0.25, 0.75, 1.0]);
        assert_eq!(r.k_hat, 3);
        // the same series scaled by d in Euclidean mode
        let sweep = w_sweep(1, &[40.0, 10.0, 5.0, 4.0]);
        let r = jump_select(&sweep, 1.0, JumpMode::Euclid { d: 10 }).unwrap();
        assert_eq!(r.k_hat, 3);
    }

    #[test]
    fn jump_geometric_decay_hits_boundary() {
        let w: Vec<f64> = (1..=7).map(|k| 0.5f64.powi(k)).collect();
        let sweep = w_sweep(1, &w);
        let r = jump_select(&sweep, 1.0, JumpMode::Madd).unwrap();
        assert_eq!(r.k_hat, sweep.k_max());
        assert!(r.diagnostics.iter().any(|s| s.contains("largest")));
    }

    #[test]
    fn penalty_value() {
        let z = PenaltySpec::default().zeta(500);
        assert!((z - 0.093_219).abs() < 1e-5);
    }

    #[test]
    fn pd_uses_b2_at_k1() {
        // two tight pairs far apart, plus the full-sample within mean at k=1
        let d = mat(&[
            vec![0.0, 0.1, 3.0, 3.0],
            vec![0.1, 0.0, 3.0, 3.0],
            vec![3.0, 3.0, 0.0, 0.1],
            vec![3.0, 3.0, 0.1, 0.0],
        ]);
        let sweep = KSweep::from_fn(&d, 1, 2, |k| {
            Ok(ClusterAssignment::from_raw(&match k {
                1 => vec![0, 0, 0, 0],
                2 => vec![0, 0, 1, 1],
                _ => vec![0, 1, 2, 2],
            }))
        })
        .unwrap();
        let pen = PenaltySpec { lambda: 0.015 };
        let r = pd_select(&sweep, pen, 100).unwrap();
        let within_all = (0.2 + 4.0 * 3.0) / 6.0;
        let expected1 = 3.0 / within_all - pen.zeta(100);
        assert!((r.statistic[0] - expected1).abs() < 1e-12);
        assert!((r.statistic[1] - (30.0 - 2.0 * pen.zeta(100))).abs() < 1e-9);
        assert_eq!(r.k_hat, 2);
    }

    #[test]
    fn dunn_select_ties_to_smallest() {
        let d = mat(&[
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ]);
        let sweep = KSweep::from_fn(&d, 2, 3, |k| {
            Ok(ClusterAssignment::from_raw(&(0..4).map(|i| i.min(k - 1)).collect::<Vec<_>>()))
        })
        .unwrap();
        // k=2: {0},{1,2,3}; k=3: {0},{1},{2,3} -- both ratios equal 1
        let r = dunn_select(&sweep).unwrap();
        assert_eq!(r.statistic, vec![1.0, 1.0]);
        assert_eq!(r.k_hat, 2);
    }

    #[test]
    fn argmax_helpers() {
        assert_eq!(first_argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(first_argmax(&[f64::NAN, 0.5]), 1);
        assert_eq!(first_argmin(&[2.0, 1.0, 1.0]), 1);
    }

    #[test]
    fn estimator_names_round_trip() {
        for e in Estimator::ALL {
            assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
        }
        assert_eq!("CV-A".parse::<Estimator>().unwrap(), Estimator::CvAverage);
        assert!("elbow".parse::<Estimator>().is_err());
    }
}
