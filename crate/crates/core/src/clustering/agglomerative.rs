use serde::{Deserialize, Serialize};

use super::ClusterAssignment;
use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};

/// Rule for the dissimilarity between two groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Linkage {
    /// Mean pairwise dissimilarity between the groups.
    Average,
    Single,
    Complete,
}

/// One merge step. Leaves are `0..n`; the node created by step `s` is `n + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    /// Number of observations under the new node.
    pub size: usize,
}

/// Full merge history of an agglomerative run: exactly `n - 1` merges.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Undoes the last `k - 1` merges and returns the resulting `k` groups,
    /// labelled in order of their first observation.
    pub fn cut(&self, k: usize) -> Result<ClusterAssignment> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidK { k, max: self.n });
        }
        let mut parent: Vec<usize> = (0..2 * self.n - 1).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (step, m) in self.merges.iter().take(self.n - k).enumerate() {
            let node = self.n + step;
            let (a, b) = (find(&mut parent, m.left), find(&mut parent, m.right));
            parent[a] = node;
            parent[b] = node;
        }
        let roots: Vec<usize> = (0..self.n).map(|i| find(&mut parent, i)).collect();
        Ok(ClusterAssignment::from_raw(&roots))
    }
}

/// Greedy agglomerative clustering.
///
/// At each step the closest pair of active groups is merged; ties go to the
/// lexicographically smallest `(slot_i, slot_j)` pair, where a merged group
/// keeps the smaller slot. Group dissimilarities are updated with the
/// Lance-Williams recurrences, which for average linkage keep the exact mean
/// pairwise dissimilarity. Heights are reported as computed and need not be
/// monotone for arbitrary inputs.
pub fn agglomerate(d: &DissimilarityMatrix, linkage: Linkage) -> Result<Dendrogram> {
    let n = d.n();
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: n });
    }
    let mut dist = d.values().to_vec();
    let mut active = vec![true; n];
    let mut node = (0..n).collect::<Vec<_>>();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for i in 0..n {
            if !active[i] {
                continue;
            }
            let row = &dist[i * n..(i + 1) * n];
            for j in (i + 1)..n {
                if active[j] && row[j] < best.2 {
                    best = (i, j, row[j]);
                }
            }
        }
        let (i, j, height) = best;
        let (si, sj) = (size[i] as f64, size[j] as f64);
        for k in 0..n {
            if !active[k] || k == i || k == j {
                continue;
            }
            let (dik, djk) = (dist[i * n + k], dist[j * n + k]);
            let updated = match linkage {
                Linkage::Average => (si * dik + sj * djk) / (si + sj),
                Linkage::Single => dik.min(djk),
                Linkage::Complete => dik.max(djk),
            };
            dist[i * n + k] = updated;
            dist[k * n + i] = updated;
        }
        active[j] = false;
        size[i] += size[j];
        merges.push(Merge {
            left: node[i],
            right: node[j],
            height,
            size: size[i],
        });
        node[i] = n + step;
    }
    Ok(Dendrogram { n, merges })
}
