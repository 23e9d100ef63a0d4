use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::ClusterAssignment;
use crate::data::DataMatrix;
use crate::dissimilarity::{DissimilarityMatrix, MatrixKind};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub n_init: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl KMeansConfig {
    pub const DEFAULT_N_INIT: usize = 10;
    pub const DEFAULT_MAX_ITER: usize = 100;

    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            n_init: Self::DEFAULT_N_INIT,
            max_iter: Self::DEFAULT_MAX_ITER,
            seed,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidK { k: self.k, max: n });
        }
        if self.n_init == 0 || self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "n_init and max_iter must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of the best restart.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub assignment: ClusterAssignment,
    /// Objective of the returned assignment.
    pub objective: f64,
    /// Objective after initialization and after every accepted sweep or
    /// polishing pass of the winning restart; strictly decreasing.
    pub trace: Vec<f64>,
    /// Winning restart index.
    pub restart: usize,
    /// True if the winning restart's batch sweeps reached a fixed point that
    /// no single-point move could improve.
    pub converged: bool,
    /// Empty clusters re-seeded during the winning restart.
    pub repairs: usize,
}

/// `sum_r (2|C_r|)^-1 sum_{z,w in C_r} D(z,w)^2` over ordered pairs.
pub fn objective_phi_star(d: &DissimilarityMatrix, a: &ClusterAssignment) -> Result<f64> {
    if d.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            got: a.n(),
        });
    }
    Ok(phi_star_labels(d, a.labels(), a.k()))
}

fn phi_star_labels(d: &DissimilarityMatrix, labels: &[usize], k: usize) -> f64 {
    let n = d.n();
    let mut within = vec![0.0; k];
    let mut size = vec![0usize; k];
    for i in 0..n {
        let li = labels[i] - 1;
        size[li] += 1;
        let row = d.row(i);
        for j in (i + 1)..n {
            if labels[j] - 1 == li {
                within[li] += row[j] * row[j];
            }
        }
    }
    // unordered-pair sums: (2|C|)^-1 * 2 * sum_{z<w} = sum_{z<w} / |C|
    within
        .iter()
        .zip(&size)
        .filter(|(_, &s)| s > 0)
        .map(|(w, &s)| w / s as f64)
        .sum()
}

/// Draws an index with probability proportional to `weights`; all-zero
/// weights fall back to a uniform draw over `fallback`.
fn weighted_pick(rng: &mut StreamRng, weights: &[f64], fallback: &[usize]) -> usize {
    let total: f64 = weights.iter().sum();
    if total > 0.0 && total.is_finite() {
        let mut u = rng.random::<f64>() * total;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                if u < w {
                    return i;
                }
                u -= w;
            }
        }
        // rounding: last positive weight
        if let Some(i) = weights.iter().rposition(|&w| w > 0.0) {
            return i;
        }
    }
    fallback[rng.random_range(0..fallback.len())]
}

/// Squared-distance-proportional seeding: the first seed is uniform, each
/// later seed is drawn with weight `min_c dist2(x, c)`.
fn seed_indices<F>(n: usize, k: usize, rng: &mut StreamRng, dist2: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> f64,
{
    let mut seeds = vec![rng.random_range(0..n)];
    let mut nearest: Vec<f64> = (0..n).map(|x| dist2(x, seeds[0])).collect();
    while seeds.len() < k {
        let mut w = nearest.clone();
        for &s in &seeds {
            w[s] = 0.0;
        }
        let free: Vec<usize> = (0..n).filter(|x| !seeds.contains(x)).collect();
        let next = weighted_pick(rng, &w, &free);
        seeds.push(next);
        for (x, m) in nearest.iter_mut().enumerate() {
            *m = m.min(dist2(x, next));
        }
    }
    seeds
}

#[inline]
fn argmin(costs: &[f64]) -> usize {
    let mut best = 0;
    for (j, &c) in costs.iter().enumerate().skip(1) {
        if c < costs[best] {
            best = j;
        }
    }
    best
}

/// Moves points into empty clusters. The donor is the point with the largest
/// cost to its own cluster among clusters that can spare a member.
fn repair_empty(labels: &mut [usize], costs: &[Vec<f64>], k: usize) -> usize {
    let mut repairs = 0;
    loop {
        let mut size = vec![0usize; k];
        for &l in labels.iter() {
            size[l] += 1;
        }
        let Some(empty) = size.iter().position(|&s| s == 0) else {
            return repairs;
        };
        let donor = (0..labels.len())
            .filter(|&i| size[labels[i]] > 1)
            .fold(None::<usize>, |best, i| match best {
                Some(b) if costs[b][labels[b]] >= costs[i][labels[i]] => Some(b),
                _ => Some(i),
            })
            .expect("k <= n leaves a cluster with at least two members");
        labels[donor] = empty;
        repairs += 1;
    }
}

struct Restart {
    labels: Vec<usize>,
    objective: f64,
    trace: Vec<f64>,
    converged: bool,
    repairs: usize,
}

/// Uniformly random labels in which every cluster is non-empty.
fn random_partition(n: usize, k: usize, rng: &mut StreamRng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut labels = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        labels[x] = if i < k { i } else { rng.random_range(0..k) };
    }
    labels
}

fn madd_restart(d: &DissimilarityMatrix, cfg: &KMeansConfig, restart: usize) -> Restart {
    let n = d.n();
    let k = cfg.k;
    let rng = &mut stream_rng(cfg.seed, restart as u64);
    let mut labels = if restart.is_multiple_of(2) {
        let seeds = seed_indices(n, k, rng, |a, b| {
            let v = d.get(a, b);
            v * v
        });
        let mut labels: Vec<usize> = (0..n)
            .map(|x| {
                let c: Vec<f64> = seeds.iter().map(|&s| d.get(x, s)).collect();
                argmin(&c)
            })
            .collect();
        for (c, &s) in seeds.iter().enumerate() {
            labels[s] = c;
        }
        labels
    } else {
        random_partition(n, k, rng)
    };
    let one_based = |l: &[usize]| l.iter().map(|x| x + 1).collect::<Vec<_>>();
    let mut objective = phi_star_labels(d, &one_based(&labels), k);
    let mut trace = vec![objective];
    let mut converged = false;
    let mut repairs = 0;

    for _ in 0..cfg.max_iter {
        // costs[x][j] = |C_j|^-1 sum_{z in C_j} D(x,z)^2
        let mut size = vec![0usize; k];
        for &l in &labels {
            size[l] += 1;
        }
        let costs: Vec<Vec<f64>> = (0..n)
            .map(|x| {
                let mut c = vec![0.0; k];
                for (z, &v) in d.row(x).iter().enumerate() {
                    c[labels[z]] += v * v;
                }
                for (cj, &s) in c.iter_mut().zip(&size) {
                    *cj /= s as f64;
                }
                c
            })
            .collect();
        let mut next: Vec<usize> = costs.iter().map(|c| argmin(c)).collect();
        let fixed = repair_empty(&mut next, &costs, k);
        if next == labels {
            converged = true;
            break;
        }
        let candidate = phi_star_labels(d, &one_based(&next), k);
        // a full-pass sweep is not guaranteed to lower the objective; stop at
        // the last improving state instead of accepting an increase
        if candidate >= objective {
            break;
        }
        repairs += fixed;
        labels = next;
        objective = candidate;
        trace.push(objective);
    }
    for _ in 0..cfg.max_iter {
        let mut moved = labels.clone();
        if !single_moves(d, &mut moved, k) && !swap_moves(d, &mut moved, k) {
            break;
        }
        let candidate = phi_star_labels(d, &one_based(&moved), k);
        if candidate >= objective {
            break;
        }
        converged = false;
        labels = moved;
        objective = candidate;
        trace.push(objective);
    }
    Restart {
        labels: one_based(&labels),
        objective,
        trace,
        converged,
        repairs,
    }
}

/// One pass of single-point moves, each taken only if it lowers the
/// objective. Returns whether anything moved.
fn single_moves(d: &DissimilarityMatrix, labels: &mut [usize], k: usize) -> bool {
    let n = d.n();
    let mut size = vec![0usize; k];
    let mut within = vec![0.0; k];
    for i in 0..n {
        size[labels[i]] += 1;
        for j in (i + 1)..n {
            if labels[i] == labels[j] {
                within[labels[i]] += d.get(i, j).powi(2);
            }
        }
    }
    let term = |s: f64, m: usize| if m == 0 { 0.0 } else { s / m as f64 };
    let tol = 1e-12 * (1.0 + within.iter().sum::<f64>());
    let mut any = false;
    for x in 0..n {
        let from = labels[x];
        if size[from] == 1 {
            continue;
        }
        let mut to_cluster = vec![0.0; k];
        for (z, &v) in d.row(x).iter().enumerate() {
            if z != x {
                to_cluster[labels[z]] += v * v;
            }
        }
        let leave = term(within[from] - to_cluster[from], size[from] - 1) - term(within[from], size[from]);
        let mut best = (from, 0.0);
        for j in (0..k).filter(|&j| j != from) {
            let delta = leave + term(within[j] + to_cluster[j], size[j] + 1) - term(within[j], size[j]);
            if delta < best.1 {
                best = (j, delta);
            }
        }
        if best.0 != from && best.1 < -tol {
            let to = best.0;
            within[from] -= to_cluster[from];
            within[to] += to_cluster[to];
            size[from] -= 1;
            size[to] += 1;
            labels[x] = to;
            any = true;
        }
    }
    any
}

/// Exchanges of two points between clusters, taken only if they lower the
/// objective. Returns whether anything moved.
fn swap_moves(d: &DissimilarityMatrix, labels: &mut [usize], k: usize) -> bool {
    let n = d.n();
    let mut size = vec![0usize; k];
    let mut within = vec![0.0; k];
    // to[x][j]: sum of squared dissimilarities from x to the members of j
    let mut to = vec![vec![0.0; k]; n];
    for i in 0..n {
        size[labels[i]] += 1;
        for j in 0..n {
            let v = d.get(i, j);
            to[i][labels[j]] += v * v;
            if j > i && labels[i] == labels[j] {
                within[labels[i]] += v * v;
            }
        }
    }
    let tol = 1e-12 * (1.0 + within.iter().sum::<f64>());
    let mut any = false;
    for x in 0..n {
        for y in (x + 1)..n {
            let (a, b) = (labels[x], labels[y]);
            if a == b {
                continue;
            }
            let dxy = d.get(x, y).powi(2);
            let da = to[y][a] - dxy - to[x][a];
            let db = to[x][b] - dxy - to[y][b];
            let delta = da / size[a] as f64 + db / size[b] as f64;
            if delta < -tol {
                within[a] += da;
                within[b] += db;
                labels[x] = b;
                labels[y] = a;
                for (z, row) in to.iter_mut().enumerate() {
                    let (vx, vy) = (d.get(z, x).powi(2), d.get(z, y).powi(2));
                    row[a] += vy - vx;
                    row[b] += vx - vy;
                }
                any = true;
            }
        }
    }
    any
}

fn best_restart(restarts: Vec<Restart>, k: usize) -> Result<KMeansFit> {
    let (restart, best) = restarts
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.objective < a.1.objective { b } else { a })
        .expect("n_init >= 1");
    Ok(KMeansFit {
        assignment: ClusterAssignment::new(ClusterAssignment::from_raw(&best.labels).labels, k)?,
        objective: best.objective,
        trace: best.trace,
        restart,
        converged: best.converged,
        repairs: best.repairs,
    })
}

/// k-means on a dissimilarity matrix, minimizing the within-cluster mean
/// squared dissimilarity objective (see [`objective_phi_star`]).
///
/// Even-numbered restarts seed with squared-dissimilarity-proportional
/// sampling and assign every point to its nearest seed; odd-numbered restarts
/// start from a uniformly random partition. Each restart then reassigns every
/// point to `argmin_j |C_j|^-1 sum_{z in C_j} D(x,z)^2` (ties to the lowest
/// cluster index) until labels stop changing, `max_iter` sweeps pass, or a
/// sweep would raise the objective. A polishing phase then moves single
/// points, or exchanges pairs of points, between clusters while that strictly
/// lowers the objective, which the batch sweeps alone cannot guarantee.
///
/// Restarts run in parallel on independent seed streams; the lowest objective
/// wins, ties to the lowest restart index.
pub fn kmeans_madd(d: &DissimilarityMatrix, cfg: &KMeansConfig) -> Result<KMeansFit> {
    if d.kind() != MatrixKind::MaddRho {
        return Err(Error::WrongKind {
            expected: MatrixKind::MaddRho.name(),
            got: d.kind().name(),
        });
    }
    cfg.validate(d.n())?;
    let restarts: Vec<Restart> = (0..cfg.n_init)
        .into_par_iter()
        .map(|r| madd_restart(d, cfg, r))
        .collect();
    best_restart(restarts, cfg.k)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn centroids(data: &DataMatrix, labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; data.d()]; k];
    let mut size = vec![0usize; k];
    for (row, &l) in data.rows().zip(labels) {
        size[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(row) {
            *s += v;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&size) {
        if c > 0 {
            s.iter_mut().for_each(|v| *v /= c as f64);
        }
    }
    sums
}

fn lloyd_restart(data: &DataMatrix, cfg: &KMeansConfig, rng: &mut StreamRng) -> Restart {
    let n = data.n();
    let k = cfg.k;
    let seeds = seed_indices(n, k, rng, |a, b| sq_dist(data.row(a), data.row(b)));
    let mut centers: Vec<Vec<f64>> = seeds.iter().map(|&s| data.row(s).to_vec()).collect();
    let mut labels: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut repairs = 0;

    for _ in 0..cfg.max_iter {
        let costs: Vec<Vec<f64>> = data
            .rows()
            .map(|x| centers.iter().map(|c| sq_dist(x, c)).collect())
            .collect();
        let mut next: Vec<usize> = costs.iter().map(|c| argmin(c)).collect();
        repairs += repair_empty(&mut next, &costs, k);
        let changed = next != labels;
        labels = next;
        centers = centroids(data, &labels, k);
        let objective: f64 = data
            .rows()
            .zip(&labels)
            .map(|(x, &l)| sq_dist(x, &centers[l]))
            .sum();
        trace.push(objective);
        if !changed {
            converged = true;
            break;
        }
    }
    Restart {
        labels: labels.iter().map(|l| l + 1).collect(),
        objective: *trace.last().expect("max_iter >= 1"),
        trace,
        converged,
        repairs,
    }
}

/// Lloyd's k-means with mean centroids, minimizing `sum_i ||x_i - m_{c(i)}||^2`.
pub fn kmeans_euclid(data: &DataMatrix, cfg: &KMeansConfig) -> Result<KMeansFit> {
    cfg.validate(data.n())?;
    let restarts: Vec<Restart> = (0..cfg.n_init)
        .into_par_iter()
        .map(|r| lloyd_restart(data, cfg, &mut stream_rng(cfg.seed, r as u64)))
        .collect();
    best_restart(restarts, cfg.k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(rows: &[Vec<f64>]) -> DissimilarityMatrix {
        DissimilarityMatrix::from_rows(rows, MatrixKind::MaddRho).unwrap()
    }

    #[test]
    fn block_zero_matrix_split_perfectly() {
        let g = [0, 0, 0, 1, 1, 1, 1];
        let rows: Vec<Vec<f64>> = g
            .iter()
            .map(|a| g.iter().map(|b| if a == b { 0.0 } else { 1.0 }).collect())
            .collect();
        let fit = kmeans_madd(&rho(&rows), &KMeansConfig::new(2, 3)).unwrap();
        assert_eq!(fit.objective, 0.0);
        assert_eq!(fit.assignment.labels(), &[1, 1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn three_point_optimum_matches_enumeration() {
        let d = rho(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![2.0, 3.0, 0.0]]);
        // the three bipartitions by hand: {1,2}|{3} -> 0.5, {1,3}|{2} -> 2, {2,3}|{1} -> 4.5
        let brute = [[1, 1, 2], [1, 2, 1], [2, 1, 1]]
            .iter()
            .map(|l| phi_star_labels(&d, l, 2))
            .collect::<Vec<_>>();
        assert_eq!(brute, vec![0.5, 2.0, 4.5]);
        let fit = kmeans_madd(&d, &KMeansConfig::new(2, 11)).unwrap();
        assert_eq!(fit.objective, 0.5);
        assert_eq!(fit.assignment.labels(), &[1, 1, 2]);
    }

    #[test]
    fn single_cluster_objective() {
        let d = rho(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![2.0, 3.0, 0.0]]);
        let fit = kmeans_madd(&d, &KMeansConfig::new(1, 0)).unwrap();
        // (2n)^-1 sum over ordered pairs = (1 + 4 + 9) * 2 / 6
        assert!((fit.objective - 14.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn phi_star_examples() {
        let d = rho(&[vec![0.0, 2.0], vec![2.0, 0.0]]);
        let one = ClusterAssignment::from_raw(&[1, 1]);
        assert_eq!(objective_phi_star(&d, &one).unwrap(), 2.0);
        let singles = ClusterAssignment::from_raw(&[1, 2]);
        assert_eq!(objective_phi_star(&d, &singles).unwrap(), 0.0);
    }

    #[test]
    fn invalid_config() {
        let d = rho(&[vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert!(kmeans_madd(&d, &KMeansConfig::new(3, 0)).is_err());
        let mut cfg = KMeansConfig::new(1, 0);
        cfg.n_init = 0;
        assert!(kmeans_madd(&d, &cfg).is_err());
    }

    #[test]
    fn lloyd_separates_two_groups() {
        let x = DataMatrix::from_rows(&[vec![0.0], vec![0.1], vec![10.0], vec![10.1]]).unwrap();
        let fit = kmeans_euclid(&x, &KMeansConfig::new(2, 5)).unwrap();
        assert_eq!(fit.assignment.labels()[0], fit.assignment.labels()[1]);
        assert_eq!(fit.assignment.labels()[2], fit.assignment.labels()[3]);
        assert_ne!(fit.assignment.labels()[0], fit.assignment.labels()[2]);
    }

    #[test]
    fn lloyd_single_cluster_is_total_sum_of_squares() {
        let x = DataMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, -1.0]]).unwrap();
        let fit = kmeans_euclid(&x, &KMeansConfig::new(1, 5)).unwrap();
        // mean (2, 1): 4+0 + 0+4 + 4+4
        assert!((fit.objective - 16.0).abs() < 1e-12);
    }

    #[test]
    fn identical_points_zero_objective() {
        let x = DataMatrix::from_rows(&vec![vec![1.5, -2.0]; 6]).unwrap();
        let fit = kmeans_euclid(&x, &KMeansConfig::new(2, 9)).unwrap();
        assert_eq!(fit.objective, 0.0);
        assert_eq!(fit.assignment.k(), 2);
    }

    #[test]
    fn deterministic_given_seed() {
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![(i as f64 * 1.7).sin(), (i as f64 * 0.3).cos()])
            .collect();
        let x = DataMatrix::from_rows(&rows).unwrap();
        let a = kmeans_euclid(&x, &KMeansConfig::new(3, 42)).unwrap();
        let b = kmeans_euclid(&x, &KMeansConfig::new(3, 42)).unwrap();
        assert_eq!(a, b);
    }
}
