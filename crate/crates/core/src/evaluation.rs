//! Rand index in the disagreement convention: the fraction of observation
//! pairs on which exactly one of the two partitions puts both points in the
//! same group. `0` means the partitions agree up to relabeling; larger values
//! are worse. This is `1 -` the classical (agreement) Rand index.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Ground-truth and predicted labels for the same `n` observations.
#[derive(Debug, Clone, Copy)]
pub struct LabeledPartitionPair<'a> {
    truth: &'a [usize],
    predicted: &'a [usize],
}

impl<'a> LabeledPartitionPair<'a> {
    pub fn new(truth: &'a [usize], predicted: &'a [usize]) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.len(),
                got: predicted.len(),
            });
        }
        if truth.len() < 2 {
            return Err(Error::TooFewObservations {
                needed: 2,
                got: truth.len(),
            });
        }
        Ok(Self { truth, predicted })
    }

    pub fn rand_index(&self) -> f64 {
        fn pairs(c: u64) -> u64 {
            c * c.saturating_sub(1) / 2
        }
        let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
        let mut left: HashMap<usize, u64> = HashMap::new();
        let mut right: HashMap<usize, u64> = HashMap::new();
        for (&a, &b) in self.truth.iter().zip(self.predicted) {
            *joint.entry((a, b)).or_default() += 1;
            *left.entry(a).or_default() += 1;
            *right.entry(b).or_default() += 1;
        }
        let both: u64 = joint.values().map(|&c| pairs(c)).sum();
        let same_truth: u64 = left.values().map(|&c| pairs(c)).sum();
        let same_pred: u64 = right.values().map(|&c| pairs(c)).sum();
        let disagree = same_truth + same_pred - 2 * both;
        disagree as f64 / pairs(self.truth.len() as u64) as f64
    }
}

/// Disagreement-rate Rand index of `predicted` against `truth`.
pub fn rand_index(truth: &[usize], predicted: &[usize]) -> Result<f64> {
    Ok(LabeledPartitionPair::new(truth, predicted)?.rand_index())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_up_to_relabeling_is_zero() {
        assert_eq!(rand_index(&[1, 1, 2, 2, 3], &[3, 3, 1, 1, 2]).unwrap(), 0.0);
    }

    #[test]
    fn crossed_partitions() {
        let r = rand_index(&[1, 1, 2, 2], &[1, 2, 1, 2]).unwrap();
        assert!((r - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(rand_index(&[1, 2], &[1]).is_err());
        assert!(rand_index(&[1], &[1]).is_err());
    }
}
