//! A clustering method is an algorithm paired with the dissimilarity it runs
//! on. [`PreparedMethod`] computes the matrix (and dendrogram) once so that a
//! whole range of `k` can be fitted cheaply.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::{
    agglomerate, kmeans_euclid, kmeans_madd, spectral, ClusterAssignment, Dendrogram,
    KMeansConfig, Linkage, SpectralConfig,
};
use crate::data::DataMatrix;
use crate::dissimilarity::{
    base_distance_matrix, euclidean_distance_matrix, madd_cross, madd_matrix,
    DissimilarityMatrix, Preset, TransformSpec,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dissimilarity {
    /// Plain Euclidean distance between observations.
    Euclidean,
    /// MADD over the given base distance.
    Madd(TransformSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Linkage(Linkage),
    /// Lloyd k-means for [`Dissimilarity::Euclidean`], dissimilarity k-means otherwise.
    KMeans,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Method {
    pub algorithm: Algorithm,
    pub dissimilarity: Dissimilarity,
}

impl Method {
    pub const fn new(algorithm: Algorithm, dissimilarity: Dissimilarity) -> Self {
        Self {
            algorithm,
            dissimilarity,
        }
    }

    pub fn prepare<'a>(&self, data: &'a DataMatrix) -> Result<PreparedMethod<'a>> {
        let (base, rho) = match self.dissimilarity {
            Dissimilarity::Euclidean => (euclidean_distance_matrix(data), None),
            Dissimilarity::Madd(spec) => {
                let base = base_distance_matrix(data, spec);
                let rho = madd_matrix(&base)?;
                (base, Some(rho))
            }
        };
        let matrix = rho.as_ref().unwrap_or(&base);
        let dendrogram = match self.algorithm {
            Algorithm::Linkage(l) => Some(agglomerate(matrix, l)?),
            _ => None,
        };
        Ok(PreparedMethod {
            method: *self,
            data,
            base,
            rho,
            dendrogram,
        })
    }
}

impl fmt::Display for Method {
    /// `<algorithm>:<dissimilarity>`, e.g. `avgl:rho0` or `km:euclid`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let algo = match self.algorithm {
            Algorithm::Linkage(Linkage::Average) => "avgl",
            Algorithm::Linkage(Linkage::Single) => "single",
            Algorithm::Linkage(Linkage::Complete) => "complete",
            Algorithm::KMeans => "km",
            Algorithm::Spectral => "spectral",
        };
        let dis = match self.dissimilarity {
            Dissimilarity::Euclidean => "euclid".to_string(),
            Dissimilarity::Madd(spec) => match spec.preset() {
                Preset::Rho0 => "rho0".to_string(),
                Preset::Rho1 => "rho1".to_string(),
                Preset::Rho2 => "rho2".to_string(),
                Preset::Custom => format!("{:?}-{:?}", spec.outer(), spec.coord()).to_lowercase(),
            },
        };
        write!(f, "{algo}:{dis}")
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown method '{s}'"));
        let (a, d) = s.split_once(':').ok_or_else(bad)?;
        let algorithm = match a.trim().to_ascii_lowercase().as_str() {
            "avgl" | "average" => Algorithm::Linkage(Linkage::Average),
            "single" => Algorithm::Linkage(Linkage::Single),
            "complete" => Algorithm::Linkage(Linkage::Complete),
            "km" | "kmeans" => Algorithm::KMeans,
            "spectral" | "spect" => Algorithm::Spectral,
            _ => return Err(bad()),
        };
        let dissimilarity = match d.trim().to_ascii_lowercase().as_str() {
            "euclid" | "euclidean" => Dissimilarity::Euclidean,
            "rho0" => Dissimilarity::Madd(TransformSpec::RHO0),
            "rho1" => Dissimilarity::Madd(TransformSpec::RHO1),
            "rho2" => Dissimilarity::Madd(TransformSpec::RHO2),
            _ => return Err(bad()),
        };
        Ok(Self::new(algorithm, dissimilarity))
    }
}

/// A method bound to a data set with its dissimilarities precomputed.
#[derive(Debug, Clone)]
pub struct PreparedMethod<'a> {
    method: Method,
    data: &'a DataMatrix,
    base: DissimilarityMatrix,
    rho: Option<DissimilarityMatrix>,
    dendrogram: Option<Dendrogram>,
}

impl<'a> PreparedMethod<'a> {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn data(&self) -> &'a DataMatrix {
        self.data
    }

    /// The matrix the algorithm clusters: MADD, or Euclidean distances.
    pub fn matrix(&self) -> &DissimilarityMatrix {
        self.rho.as_ref().unwrap_or(&self.base)
    }

    pub fn dendrogram(&self) -> Option<&Dendrogram> {
        self.dendrogram.as_ref()
    }

    /// Partition into `k` groups; `k = 1` is the trivial partition for every
    /// algorithm. `seed` only matters for the randomized algorithms.
    pub fn fit(&self, k: usize, seed: u64) -> Result<ClusterAssignment> {
        let n = self.data.n();
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, max: n });
        }
        if k == 1 {
            return ClusterAssignment::new(vec![1; n], 1);
        }
        match self.method.algorithm {
            Algorithm::Linkage(_) => self
                .dendrogram
                .as_ref()
                .expect("linkage methods build a dendrogram")
                .cut(k),
            Algorithm::KMeans => {
                let cfg = KMeansConfig::new(k, seed);
                let fit = match self.method.dissimilarity {
                    Dissimilarity::Euclidean => kmeans_euclid(self.data, &cfg)?,
                    Dissimilarity::Madd(_) => kmeans_madd(self.matrix(), &cfg)?,
                };
                Ok(fit.assignment)
            }
            Algorithm::Spectral => Ok(spectral(self.matrix(), &SpectralConfig::new(k, seed))?.assignment),
        }
    }

    /// Assigns each row of `query` to a cluster of `assignment` (which must
    /// partition this method's data). The cost of cluster `j` is the mean
    /// squared dissimilarity to its members: MADD against this sample for MADD
    /// methods, Euclidean otherwise; Euclidean k-means uses the nearest
    /// centroid instead. Returned labels are in `1..=k`, ties to the lowest.
    pub fn extend(&self, assignment: &ClusterAssignment, query: &DataMatrix) -> Result<Vec<usize>> {
        if assignment.n() != self.data.n() {
            return Err(Error::DimensionMismatch {
                expected: self.data.n(),
                got: assignment.n(),
            });
        }
        if query.d() != self.data.d() {
            return Err(Error::DimensionMismatch {
                expected: self.data.d(),
                got: query.d(),
            });
        }
        let clusters = assignment.clusters();
        let pick = |costs: Vec<f64>| {
            let mut best = 0;
            for (j, &c) in costs.iter().enumerate() {
                if c < costs[best] {
                    best = j;
                }
            }
            best + 1
        };
        let sq = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum() };
        query
            .rows()
            .map(|x| match (self.method.dissimilarity, self.method.algorithm) {
                (Dissimilarity::Madd(spec), _) => {
                    let r = madd_cross(self.data, &self.base, x, spec)?;
                    Ok(pick(
                        clusters
                            .iter()
                            .map(|c| c.iter().map(|&z| r[z] * r[z]).sum::<f64>() / c.len() as f64)
                            .collect(),
                    ))
                }
                (Dissimilarity::Euclidean, Algorithm::KMeans) => Ok(pick(
                    clusters
                        .iter()
                        .map(|c| {
                            let mut m = vec![0.0; x.len()];
                            for &z in c {
                                m.iter_mut().zip(self.data.row(z)).for_each(|(a, b)| *a += b);
                            }
                            m.iter_mut().for_each(|a| *a /= c.len() as f64);
                            sq(x, &m)
                        })
                        .collect(),
                )),
                (Dissimilarity::Euclidean, _) => Ok(pick(
                    clusters
                        .iter()
                        .map(|c| c.iter().map(|&z| sq(x, self.data.row(z))).sum::<f64>() / c.len() as f64)
                        .collect(),
                )),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_groups() -> DataMatrix {
        DataMatrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![0.0, 0.1],
            vec![5.0, 5.0],
            vec![5.1, 5.0],
            vec![5.0, 5.1],
        ])
        .unwrap()
    }

    #[test]
    fn parse_round_trip() {
        for s in ["avgl:rho0", "single:euclid", "complete:rho1", "km:rho2", "spectral:euclid"] {
            let m: Method = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("avgl".parse::<Method>().is_err());
        assert!("ward:rho0".parse::<Method>().is_err());
    }

    #[test]
    fn every_method_splits_two_groups() {
        let x = two_groups();
        for s in ["avgl:rho0", "avgl:euclid", "km:rho0", "km:euclid", "spectral:rho1", "spectral:euclid"] {
            let m: Method = s.parse().unwrap();
            let p = m.prepare(&x).unwrap();
            assert_eq!(p.fit(2, 3).unwrap().labels(), &[1, 1, 1, 2, 2, 2], "{s}");
            assert_eq!(p.fit(1, 3).unwrap().k(), 1);
        }
    }

    #[test]
    fn extension_follows_nearest_group() {
        let x = two_groups();
        let q = DataMatrix::from_rows(&[vec![4.9, 5.2], vec![0.2, -0.1]]).unwrap();
        for s in ["avgl:rho0", "km:euclid", "avgl:euclid"] {
            let p = s.parse::<Method>().unwrap().prepare(&x).unwrap();
            let a = p.fit(2, 0).unwrap();
            assert_eq!(p.extend(&a, &q).unwrap(), vec![2, 1], "{s}");
        }
    }
}
