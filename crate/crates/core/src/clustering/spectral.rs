use serde::{Deserialize, Serialize};

use super::eigen::symmetric_eigen;
use super::kmeans::{kmeans_euclid, KMeansConfig};
use super::ClusterAssignment;
use crate::data::DataMatrix;
use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};

/// Bandwidth of the Gaussian similarity `exp(-D^2 / (2 sigma^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaRule {
    /// `sigma` = median of the off-diagonal entries of `D`.
    Median,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub k: usize,
    pub sigma: SigmaRule,
    /// k-means run on the embedded rows; its `k` must equal `self.k`.
    pub embed: KMeansConfig,
}

impl SpectralConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            sigma: SigmaRule::Median,
            embed: KMeansConfig::new(k, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFit {
    pub assignment: ClusterAssignment,
    pub sigma: f64,
    /// The `k` smallest eigenvalues of the normalized Laplacian.
    pub eigenvalues: Vec<f64>,
}

fn resolve_sigma(d: &DissimilarityMatrix, rule: SigmaRule) -> Result<f64> {
    match rule {
        SigmaRule::Fixed(s) if s > 0.0 && s.is_finite() => Ok(s),
        SigmaRule::Fixed(s) => Err(Error::InvalidParameter(format!(
            "sigma must be positive and finite, got {s}"
        ))),
        SigmaRule::Median => {
            let mut off: Vec<f64> = d.upper_triangle().collect();
            if off.is_empty() {
                return Err(Error::TooFewObservations { needed: 2, got: d.n() });
            }
            off.sort_by(f64::total_cmp);
            let m = off.len();
            let median = if m % 2 == 1 {
                off[m / 2]
            } else {
                0.5 * (off[m / 2 - 1] + off[m / 2])
            };
            if median > 0.0 {
                Ok(median)
            } else {
                Err(Error::InvalidParameter(
                    "median dissimilarity is zero; use a fixed sigma".into(),
                ))
            }
        }
    }
}

/// Row-major Gaussian similarities `s_ij = exp(-D_ij^2 / (2 sigma^2))`,
/// including `s_ii = 1`.
pub fn similarity_matrix(d: &DissimilarityMatrix, sigma: f64) -> Vec<f64> {
    let denom = 2.0 * sigma * sigma;
    d.values().iter().map(|v| (-v * v / denom).exp()).collect()
}

/// Normalized-cut spectral clustering on a dissimilarity matrix.
///
/// Self-loops are dropped from the affinity graph, the `k` eigenvectors of
/// `I - Deg^-1/2 W Deg^-1/2` with smallest eigenvalues form an `n x k`
/// embedding, and its unit-normalized rows are grouped with Lloyd k-means.
pub fn spectral(d: &DissimilarityMatrix, cfg: &SpectralConfig) -> Result<SpectralFit> {
    let n = d.n();
    if cfg.k < 2 || cfg.k > n {
        return Err(Error::InvalidK { k: cfg.k, max: n });
    }
    if cfg.embed.k != cfg.k {
        return Err(Error::InvalidParameter(format!(
            "embedding k-means targets {} clusters, expected {}",
            cfg.embed.k, cfg.k
        )));
    }
    let sigma = resolve_sigma(d, cfg.sigma)?;
    let mut w = similarity_matrix(d, sigma);
    for i in 0..n {
        w[i * n + i] = 0.0;
    }
    let deg: Vec<f64> = w.chunks(n).map(|r| r.iter().sum()).collect();
    if let Some(i) = deg.iter().position(|&g| g <= 0.0) {
        return Err(Error::IsolatedVertex(i));
    }
    let inv_sqrt: Vec<f64> = deg.iter().map(|g| 1.0 / g.sqrt()).collect();
    let mut lap = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            lap[i * n + j] = id - inv_sqrt[i] * w[i * n + j] * inv_sqrt[j];
        }
    }
    let eig = symmetric_eigen(n, &lap)?;
    let k = cfg.k;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r: Vec<f64> = eig.vectors[..k].iter().map(|v| v[i]).collect();
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                r.iter_mut().for_each(|x| *x /= norm);
            }
            r
        })
        .collect();
    let embedding = DataMatrix::from_rows(&rows)?;
    let fit = kmeans_euclid(&embedding, &cfg.embed)?;
    Ok(SpectralFit {
        assignment: fit.assignment,
        sigma,
        eigenvalues: eig.values[..k].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissimilarity::MatrixKind;

    fn blocks(groups: &[usize], between: f64) -> DissimilarityMatrix {
        let rows: Vec<Vec<f64>> = groups
            .iter()
            .map(|a| groups.iter().map(|b| if a == b { 0.0 } else { between }).collect())
            .collect();
        DissimilarityMatrix::from_rows(&rows, MatrixKind::MaddRho).unwrap()
    }

    #[test]
    fn recovers_disconnected_blocks() {
        let d = blocks(&[0, 0, 0, 1, 1, 1], 50.0);
        let mut cfg = SpectralConfig::new(2, 7);
        cfg.sigma = SigmaRule::Fixed(1.0);
        let fit = spectral(&d, &cfg).unwrap();
        assert_eq!(fit.assignment.labels(), &[1, 1, 1, 2, 2, 2]);
        assert!(fit.eigenvalues[1].abs() < 1e-10);
    }

    #[test]
    fn median_rule_on_blocks() {
        let d = blocks(&[0, 0, 0, 1, 1, 1, 1], 3.0);
        let fit = spectral(&d, &SpectralConfig::new(2, 1)).unwrap();
        assert_eq!(fit.sigma, 3.0);
        assert_eq!(fit.assignment.labels(), &[1, 1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn self_similarity_is_one() {
        let d = blocks(&[0, 1], 2.0);
        let s = similarity_matrix(&d, 1.0);
        assert_eq!(s[0], 1.0);
        assert_eq!(s[3], 1.0);
        assert!((s[1] - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn isolated_vertex_reported() {
        let d = blocks(&[0, 0, 1], 1e6);
        let mut cfg = SpectralConfig::new(2, 0);
        cfg.sigma = SigmaRule::Fixed(1.0);
        assert_eq!(spectral(&d, &cfg), Err(Error::IsolatedVertex(2)));
    }

    #[test]
    fn parameter_checks() {
        let d = blocks(&[0, 0, 1, 1], 1.0);
        assert!(spectral(&d, &SpectralConfig::new(1, 0)).is_err());
        let mut cfg = SpectralConfig::new(2, 0);
        cfg.sigma = SigmaRule::Fixed(-1.0);
        assert!(spectral(&d, &cfg).is_err());
        let zero = blocks(&[0, 0, 0, 0, 1], 1.0);
        assert!(spectral(&zero, &SpectralConfig::new(2, 0)).is_err());
    }
}
