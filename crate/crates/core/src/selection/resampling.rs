use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::{first_argmin, Estimator, EstimatorReport};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::evaluation::rand_index;
use crate::method::Method;
use crate::rng::{derive_seed, stream_rng};

/// Smallest `k` (1-based) with `gap[k] >= gap[k+1] - s[k+1]`, if any.
pub fn gap_rule(gap: &[f64], s: &[f64]) -> Option<usize> {
    (0..gap.len().saturating_sub(1))
        .find(|&i| gap[i] >= gap[i + 1] - s[i + 1])
        .map(|i| i + 1)
}

/// `ln W_k` for `k = 1..=top`, failing on zero dispersion.
fn log_dispersions(data: &DataMatrix, method: Method, top: usize, seed: u64) -> Result<Vec<f64>> {
    let p = method.prepare(data)?;
    (1..=top)
        .map(|k| {
            let a = p.fit(k, seed)?;
            let w = super::within_dispersion(p.matrix(), &a)?;
            if w > 0.0 {
                Ok(w.ln())
            } else {
                Err(Error::DegenerateDispersion(k))
            }
        })
        .collect()
}

/// Gap statistic against a reference drawn uniformly over each feature's
/// observed range. MADD is recomputed on every reference sample.
///
/// `Gap(k) = mean_b ln W_k^(b) - ln W_k`, `s_k = sqrt(1 + 1/B) sd_k` with the
/// `1/B` standard deviation; the selected `k` is the smallest one with
/// `Gap(k) >= Gap(k+1) - s_{k+1}` over `1..=k_max`, or `k_max` (flagged) if no
/// `k` qualifies.
pub fn gap_select(
    data: &DataMatrix,
    method: Method,
    k_max: usize,
    b: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    if b < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 reference samples, got {b}")));
    }
    let n = data.n();
    if k_max == 0 || k_max + 1 > n {
        return Err(Error::InvalidK { k: k_max + 1, max: n });
    }
    let top = k_max + 1;
    let observed = log_dispersions(data, method, top, derive_seed(seed, 0))?;
    let ranges = data.column_ranges();
    let reference: Vec<Vec<f64>> = (0..b)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, 2 * rep as u64 + 1);
            let mut values = Vec::with_capacity(n * data.d());
            for _ in 0..n {
                for &(lo, hi) in &ranges {
                    values.push(if hi > lo { rng.random_range(lo..=hi) } else { lo });
                }
            }
            let sample = DataMatrix::new(n, data.d(), values)?;
            log_dispersions(&sample, method, top, derive_seed(seed, 2 * rep as u64 + 2))
        })
        .collect::<Result<_>>()?;

    let bf = b as f64;
    let mut gap = Vec::with_capacity(top);
    let mut spread = Vec::with_capacity(top);
    for k in 0..top {
        let mean = reference.iter().map(|r| r[k]).sum::<f64>() / bf;
        let var = reference.iter().map(|r| (r[k] - mean).powi(2)).sum::<f64>() / bf;
        gap.push(mean - observed[k]);
        spread.push((1.0 + 1.0 / bf).sqrt() * var.sqrt());
    }
    let mut diagnostics = Vec::new();
    let k_hat = gap_rule(&gap, &spread).unwrap_or_else(|| {
        diagnostics.push(format!("no k satisfied the gap rule; using k={k_max}"));
        k_max
    });
    gap.truncate(k_max);
    spread.truncate(k_max);
    Ok(EstimatorReport {
        estimator: Estimator::Gap,
        ks: (1..=k_max).collect(),
        statistic: gap,
        k_hat,
        spread,
        minimizers: Vec::new(),
        diagnostics,
    })
}

/// Instability-based selection over `k = 2..=k_max`.
///
/// Each repetition splits the sample at random into two fitting parts of size
/// `m` (the largest multiple of 5 not exceeding `n/3`) and a held-out rest.
/// The method is fitted on each part, both partitions are extended to the
/// held-out points, and `Ins(k)` is the Rand index between the two extended
/// labelings. Returns the average-instability minimizer and the modal
/// per-repetition minimizer, in that order.
pub fn cv_select(
    data: &DataMatrix,
    method: Method,
    k_max: usize,
    reps: usize,
    seed: u64,
) -> Result<(EstimatorReport, EstimatorReport)> {
    let n = data.n();
    if n < 15 {
        return Err(Error::TooFewObservations { needed: 15, got: n });
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("need at least one repetition".into()));
    }
    let m = 5 * (n / 15);
    if k_max < 2 || k_max > m {
        return Err(Error::InvalidK { k: k_max, max: m });
    }
    let ks: Vec<usize> = (2..=k_max).collect();
    let per_rep: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut stream_rng(seed, 3 * rep as u64));
            let first = data.select_rows(&order[..m])?;
            let second = data.select_rows(&order[m..2 * m])?;
            let rest = data.select_rows(&order[2 * m..])?;
            let p1 = method.prepare(&first)?;
            let p2 = method.prepare(&second)?;
            ks.iter()
                .map(|&k| {
                    let a1 = p1.fit(k, derive_seed(seed, 3 * rep as u64 + 1))?;
                    let a2 = p2.fit(k, derive_seed(seed, 3 * rep as u64 + 2))?;
                    let l1 = p1.extend(&a1, &rest)?;
                    let l2 = p2.extend(&a2, &rest)?;
                    rand_index(&l1, &l2)
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mean: Vec<f64> = (0..ks.len())
        .map(|i| per_rep.iter().map(|r| r[i]).sum::<f64>() / reps as f64)
        .collect();
    let minimizers: Vec<usize> = per_rep.iter().map(|r| ks[first_argmin(r)]).collect();
    let mut votes = vec![0usize; ks.len()];
    for &k in &minimizers {
        votes[k - 2] += 1;
    }
    let vote_stat: Vec<f64> = votes.iter().map(|&v| v as f64).collect();
    let mode = ks[super::first_argmax(&vote_stat)];

    let average = EstimatorReport {
        estimator: Estimator::CvAverage,
        ks: ks.clone(),
        k_hat: ks[first_argmin(&mean)],
        statistic: mean,
        spread: Vec::new(),
        minimizers: Vec::new(),
        diagnostics: Vec::new(),
    };
    let vote = EstimatorReport {
        estimator: Estimator::CvVote,
        ks,
        statistic: vote_stat,
        k_hat: mode,
        spread: Vec::new(),
        minimizers,
        diagnostics: Vec::new(),
    };
    Ok((average, vote))
}
