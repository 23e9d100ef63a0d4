//! Agglomerative linkage, k-means on dissimilarities, Lloyd k-means and
//! normalized-cut spectral clustering.

mod agglomerative;
pub mod eigen;
mod kmeans;
mod spectral;

pub use agglomerative::{agglomerate, Dendrogram, Linkage, Merge};
pub use kmeans::{kmeans_euclid, kmeans_madd, objective_phi_star, KMeansConfig, KMeansFit};
pub use spectral::{similarity_matrix, spectral, SigmaRule, SpectralConfig, SpectralFit};

use crate::error::{Error, Result};

/// Labels `1..=k` for each of `n` observations; every cluster is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterAssignment {
    /// Validates labels already in `1..=k`.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        let mut seen = vec![false; k];
        for &l in &labels {
            if l == 0 || l > k {
                return Err(Error::InvalidK { k: l, max: k });
            }
            seen[l - 1] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!("cluster {} is empty", empty + 1)));
        }
        Ok(Self { labels, k })
    }

    /// Relabels arbitrary group ids to `1..=k` in order of first appearance.
    pub fn from_raw(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|&r| {
                let next = map.len() + 1;
                *map.entry(r).or_insert(next)
            })
            .collect();
        Self { labels, k: map.len() }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Member indices per cluster; entry `c` holds label `c + 1`.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l - 1].push(i);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &l in &self.labels {
            out[l - 1] += 1;
        }
        out
    }

    /// True when every cluster of `self` lies inside one cluster of `coarser`.
    pub fn refines(&self, coarser: &ClusterAssignment) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        let mut parent = vec![0usize; self.k];
        for (&fine, &coarse) in self.labels.iter().zip(&coarser.labels) {
            let p = &mut parent[fine - 1];
            if *p == 0 {
                *p = coarse;
            } else if *p != coarse {
                return false;
            }
        }
        true
    }
}
