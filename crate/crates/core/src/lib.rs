//! Clustering of high-dimension, low-sample-size data with MADD (mean
//! absolute difference of distances) dissimilarities.
//!
//! ```
//! use madd_core::datagen::{sample_scenario, Scenario, ScenarioSpec};
//! use madd_core::{rand_index, Method};
//!
//! let sample = sample_scenario(&ScenarioSpec::desk(Scenario::Ex6, 200, 1)).unwrap();
//! let method: Method = "avgl:rho0".parse().unwrap();
//! let labels = method.prepare(&sample.data).unwrap().fit(2, 1).unwrap();
//! assert!(rand_index(&sample.labels, labels.labels()).unwrap() < 0.05);
//! ```

pub mod clustering;
pub mod data;
pub mod datagen;
pub mod dissimilarity;
pub mod error;
pub mod evaluation;
pub mod method;
pub mod rng;
pub mod selection;

pub use clustering::{ClusterAssignment, Dendrogram, Linkage};
pub use data::DataMatrix;
pub use dissimilarity::{
    base_distance, base_distance_matrix, euclidean_distance_matrix, madd_cross, madd_from_data,
    madd_matrix, DissimilarityMatrix, MatrixKind, Preset, TransformSpec,
};
pub use error::{Error, Result};
pub use evaluation::{rand_index, LabeledPartitionPair};
pub use method::{Algorithm, Dissimilarity, Method, PreparedMethod};
