//! Dense symmetric eigendecomposition (Householder tridiagonalization followed
//! by implicit shifted QL/QR sweeps).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix, sorted by ascending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector for `values[j]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Decomposes the `n x n` row-major symmetric matrix `a`. Only symmetry up to
/// rounding is assumed; the lower triangle is what the solver reads.
pub fn symmetric_eigen(n: usize, a: &[f64]) -> Result<EigenPairs> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: a.len(),
        });
    }
    if let Some(pos) = a.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos / n.max(1),
            col: pos % n.max(1),
        });
    }
    let max_iter = 100 * n.max(10);
    let m = DMatrix::from_row_slice(n, n, a);
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, max_iter)
        .ok_or(Error::NoConvergence(max_iter))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    Ok(EigenPairs {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect(),
    })
}
