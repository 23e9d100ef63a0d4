//! Base distances `phi_{h,psi}` and the MADD dissimilarity built on top of them.
//!
//! For a coordinate map `psi` and an outer map `h`, the base distance between
//! two `d`-vectors is `h(mean_q psi(|x_q - y_q|))`. MADD compares two
//! observations through their distance profiles to the rest of the sample:
//!
//! ```text
//! rho(x_i, x_j) = (n - 2)^-1 * sum_{k != i, j} |phi(x_i, x_k) - phi(x_j, x_k)|
//! ```
//!
//! Within-population MADD values shrink as the dimension grows while
//! between-population values stay bounded away from zero, which is what makes
//! the clustering routines in this crate work on HDLSS data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Outer map `h` applied to the coordinate-wise mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterMap {
    Sqrt,
    Identity,
}

impl OuterMap {
    #[inline]
    pub fn apply(self, t: f64) -> f64 {
        match self {
            OuterMap::Sqrt => t.sqrt(),
            OuterMap::Identity => t,
        }
    }
}

/// Coordinate map `psi` applied to each absolute difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordMap {
    Square,
    Identity,
    OneMinusExp,
}

impl CoordMap {
    #[inline]
    pub fn apply(self, t: f64) -> f64 {
        match self {
            CoordMap::Square => t * t,
            CoordMap::Identity => t,
            // -expm1(-t) = 1 - e^{-t} without cancellation for small t
            CoordMap::OneMinusExp => -(-t).exp_m1(),
        }
    }
}

/// Named members of the distance family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `(sqrt(t), t^2)`: Euclidean distance divided by `sqrt(d)`.
    Rho0,
    /// `(t, t)`: mean absolute difference.
    Rho1,
    /// `(t, 1 - e^{-t})`: bounded coordinate map, robust to heavy tails.
    Rho2,
    Custom,
}

/// The `(h, psi)` pair selecting one member of the distance family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformSpec {
    outer: OuterMap,
    coord: CoordMap,
}

impl TransformSpec {
    pub const RHO0: TransformSpec = TransformSpec {
        outer: OuterMap::Sqrt,
        coord: CoordMap::Square,
    };
    pub const RHO1: TransformSpec = TransformSpec {
        outer: OuterMap::Identity,
        coord: CoordMap::Identity,
    };
    pub const RHO2: TransformSpec = TransformSpec {
        outer: OuterMap::Identity,
        coord: CoordMap::OneMinusExp,
    };

    /// Composes built-in maps. `(identity, square)` is rejected because the
    /// mean squared difference violates the triangle inequality, and both MADD
    /// dominance and the downstream theory need `phi` to be a distance.
    pub fn new(outer: OuterMap, coord: CoordMap) -> Result<Self> {
        if outer == OuterMap::Identity && coord == CoordMap::Square {
            return Err(Error::InvalidParameter(
                "h = identity with psi = square is not a distance".into(),
            ));
        }
        Ok(Self { outer, coord })
    }

    pub fn from_preset(preset: Preset) -> Option<Self> {
        match preset {
            Preset::Rho0 => Some(Self::RHO0),
            Preset::Rho1 => Some(Self::RHO1),
            Preset::Rho2 => Some(Self::RHO2),
            Preset::Custom => None,
        }
    }

    pub fn outer(&self) -> OuterMap {
        self.outer
    }

    pub fn coord(&self) -> CoordMap {
        self.coord
    }

    pub fn preset(&self) -> Preset {
        match *self {
            Self::RHO0 => Preset::Rho0,
            Self::RHO1 => Preset::Rho1,
            Self::RHO2 => Preset::Rho2,
            _ => Preset::Custom,
        }
    }
}

/// Which quantity a [`DissimilarityMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    BasePhi,
    MaddRho,
}

impl MatrixKind {
    pub(crate) fn name(self) -> &'static str {
        match self {
            MatrixKind::BasePhi => "base-phi",
            MatrixKind::MaddRho => "madd-rho",
        }
    }
}

/// Symmetric, zero-diagonal, non-negative `n x n` matrix stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
    kind: MatrixKind,
}

impl DissimilarityMatrix {
    /// Validates and wraps a dense row-major matrix.
    pub fn new(n: usize, values: Vec<f64>, kind: MatrixKind) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("non-zero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let a = values[i * n + j];
                if !a.is_finite() || a < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i}, {j}) = {a} is not a finite non-negative value"
                    )));
                }
                if a != values[j * n + i] {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, values, kind })
    }

    pub fn from_rows(rows: &[Vec<f64>], kind: MatrixKind) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(n, values, kind)
    }

    /// Builds the matrix from a pairwise function evaluated on `i < j`.
    fn from_upper<F>(n: usize, kind: MatrixKind, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).map(|j| f(i, j)).collect())
            .collect();
        let mut values = vec![0.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self { n, values, kind }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Multiplies every entry by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale {c} must be positive")));
        }
        Ok(Self {
            n: self.n,
            values: self.values.iter().map(|v| v * c).collect(),
            kind: self.kind,
        })
    }

    /// Restricts the matrix to the listed observations, in order.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut values = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                values.push(self.get(i, j));
            }
        }
        Self {
            n: m,
            values,
            kind: self.kind,
        }
    }

    /// Off-diagonal entries `(i < j)` in row order.
    pub fn upper_triangle(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| self.get(i, j)))
    }
}

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (tree) summation of `coord(|x_q - y_q|)`.
fn pairwise_sum(x: &[f64], y: &[f64], coord: CoordMap) -> f64 {
    if x.len() <= PAIRWISE_BLOCK {
        let mut s = 0.0;
        for (a, b) in x.iter().zip(y) {
            s += coord.apply((a - b).abs());
        }
        return s;
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid], &y[..mid], coord) + pairwise_sum(&x[mid..], &y[mid..], coord)
}

#[inline]
fn phi_unchecked(x: &[f64], y: &[f64], spec: TransformSpec) -> f64 {
    spec.outer
        .apply(pairwise_sum(x, y, spec.coord) / x.len() as f64)
}

/// `phi_{h,psi}(x, y) = h(d^-1 sum_q psi(|x_q - y_q|))`.
pub fn base_distance(x: &[f64], y: &[f64], spec: TransformSpec) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("vectors must be non-empty".into()));
    }
    for (which, v) in [x, y].into_iter().enumerate() {
        if let Some(col) = v.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite { row: which, col });
        }
    }
    Ok(phi_unchecked(x, y, spec))
}

/// All pairwise base distances of the sample.
pub fn base_distance_matrix(data: &DataMatrix, spec: TransformSpec) -> DissimilarityMatrix {
    DissimilarityMatrix::from_upper(data.n(), MatrixKind::BasePhi, |i, j| {
        phi_unchecked(data.row(i), data.row(j), spec)
    })
}

/// Plain Euclidean distances `||x_i - x_j||`, i.e. the `rho0` base scaled by `sqrt(d)`.
pub fn euclidean_distance_matrix(data: &DataMatrix) -> DissimilarityMatrix {
    let scale = (data.d() as f64).sqrt();
    DissimilarityMatrix::from_upper(data.n(), MatrixKind::BasePhi, |i, j| {
        phi_unchecked(data.row(i), data.row(j), TransformSpec::RHO0) * scale
    })
}

#[inline]
fn abs_diff_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()
}

/// MADD matrix from a base distance matrix.
pub fn madd_matrix(base: &DissimilarityMatrix) -> Result<DissimilarityMatrix> {
    if base.kind != MatrixKind::BasePhi {
        return Err(Error::WrongKind {
            expected: MatrixKind::BasePhi.name(),
            got: base.kind.name(),
        });
    }
    let n = base.n;
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    let denom = (n - 2) as f64;
    Ok(DissimilarityMatrix::from_upper(
        n,
        MatrixKind::MaddRho,
        |i, j| {
            // i < j: sum over k outside {i, j} in three contiguous runs
            let (ri, rj) = (base.row(i), base.row(j));
            let s = abs_diff_sum(&ri[..i], &rj[..i])
                + abs_diff_sum(&ri[i + 1..j], &rj[i + 1..j])
                + abs_diff_sum(&ri[j + 1..], &rj[j + 1..]);
            s / denom
        },
    ))
}

/// Convenience: base distances followed by MADD.
pub fn madd_from_data(data: &DataMatrix, spec: TransformSpec) -> Result<DissimilarityMatrix> {
    madd_matrix(&base_distance_matrix(data, spec))
}

/// MADD between an external `query` point and every training observation.
///
/// The reference set is the training sample only: entry `j` averages
/// `|phi(query, z) - phi(x_j, z)|` over the `n - 1` training points `z != x_j`.
pub fn madd_cross(
    train: &DataMatrix,
    train_base: &DissimilarityMatrix,
    query: &[f64],
    spec: TransformSpec,
) -> Result<Vec<f64>> {
    if query.len() != train.d() {
        return Err(Error::DimensionMismatch {
            expected: train.d(),
            got: query.len(),
        });
    }
    let n = train.n();
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: n });
    }
    if train_base.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: train_base.n(),
        });
    }
    if train_base.kind() != MatrixKind::BasePhi {
        return Err(Error::WrongKind {
            expected: MatrixKind::BasePhi.name(),
            got: train_base.kind().name(),
        });
    }
    if let Some(col) = query.iter().position(|a| !a.is_finite()) {
        return Err(Error::NonFinite { row: 0, col });
    }
    let to_query: Vec<f64> = train
        .rows()
        .map(|z| phi_unchecked(query, z, spec))
        .collect();
    let denom = (n - 1) as f64;
    Ok((0..n)
        .map(|j| {
            let rj = train_base.row(j);
            (abs_diff_sum(&to_query[..j], &rj[..j]) + abs_diff_sum(&to_query[j + 1..], &rj[j + 1..]))
                / denom
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn rho0_constant_difference() {
        let v = base_distance(&[1.0; 4], &[0.0; 4], TransformSpec::RHO0).unwrap();
        assert!(close(v, 1.0));
    }

    #[test]
    fn rho2_identical_vectors() {
        let x = [0.3, -2.0, 7.5];
        assert_eq!(base_distance(&x, &x, TransformSpec::RHO2).unwrap(), 0.0);
    }

    #[test]
    fn rho1_hand_arithmetic() {
        let v = base_distance(&[0.0, 3.0], &[1.0, 1.0], TransformSpec::RHO1).unwrap();
        assert!(close(v, 1.5));
    }

    #[test]
    fn base_distance_errors() {
        assert!(matches!(
            base_distance(&[0.0, 1.0], &[0.0], TransformSpec::RHO1),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            base_distance(&[0.0, f64::INFINITY], &[0.0, 1.0], TransformSpec::RHO1),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn pairwise_sum_matches_naive_at_large_d() {
        let x: Vec<f64> = (0..10_000).map(|q| (q as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..10_000).map(|q| (q as f64 * 0.11).cos()).collect();
        let naive: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        let tree = pairwise_sum(&x, &y, CoordMap::Square);
        assert!((naive - tree).abs() < 1e-9 * naive);
    }

    #[test]
    fn one_dimensional_matrix() {
        let x = DataMatrix::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let m = base_distance_matrix(&x, TransformSpec::RHO1);
        let expected = [0.0, 1.0, 3.0, 1.0, 0.0, 2.0, 3.0, 2.0, 0.0];
        assert_eq!(m.values(), &expected);
    }

    #[test]
    fn duplicated_rows_have_zero_distance() {
        let x = DataMatrix::from_rows(&[vec![0.5, 2.0], vec![1.0, 1.0], vec![0.5, 2.0]]).unwrap();
        let m = base_distance_matrix(&x, TransformSpec::RHO2);
        assert_eq!(m.get(0, 2), 0.0);
        let rho = madd_matrix(&m).unwrap();
        assert_eq!(rho.get(0, 2), 0.0);
    }

    #[test]
    fn madd_single_reference_point() {
        let base = DissimilarityMatrix::from_rows(
            &[vec![0.0, 1.0, 4.0], vec![1.0, 0.0, 3.0], vec![4.0, 3.0, 0.0]],
            MatrixKind::BasePhi,
        )
        .unwrap();
        let rho = madd_matrix(&base).unwrap();
        assert_eq!(rho.get(0, 1), 1.0);
        assert_eq!(rho.get(0, 2), 2.0);
        assert_eq!(rho.get(1, 2), 3.0);
        assert_eq!(rho.kind(), MatrixKind::MaddRho);
    }

    #[test]
    fn madd_rejects_small_or_wrong_kind() {
        let base = DissimilarityMatrix::from_rows(
            &[vec![0.0, 1.0], vec![1.0, 0.0]],
            MatrixKind::BasePhi,
        )
        .unwrap();
        assert!(matches!(
            madd_matrix(&base),
            Err(Error::TooFewObservations { needed: 3, got: 2 })
        ));
        let x = DataMatrix::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let rho = madd_from_data(&x, TransformSpec::RHO1).unwrap();
        assert!(matches!(madd_matrix(&rho), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn madd_cross_hand_arithmetic() {
        let x = DataMatrix::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let base = base_distance_matrix(&x, TransformSpec::RHO1);
        let v = madd_cross(&x, &base, &[0.0], TransformSpec::RHO1).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 2.0]);
        let w = madd_cross(&x, &base, &[1.0], TransformSpec::RHO1).unwrap();
        assert_eq!(w[1], 0.0);
        assert!(w.iter().all(|&v| v >= 0.0));
        assert!(matches!(
            madd_cross(&x, &base, &[0.0, 1.0], TransformSpec::RHO1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn presets_round_trip() {
        for p in [Preset::Rho0, Preset::Rho1, Preset::Rho2] {
            assert_eq!(TransformSpec::from_preset(p).unwrap().preset(), p);
        }
        let custom = TransformSpec::new(OuterMap::Sqrt, CoordMap::Identity).unwrap();
        assert_eq!(custom.preset(), Preset::Custom);
        assert!(TransformSpec::new(OuterMap::Identity, CoordMap::Square).is_err());
    }

    #[test]
    fn coord_maps_vanish_at_zero_and_increase() {
        for c in [CoordMap::Square, CoordMap::Identity, CoordMap::OneMinusExp] {
            assert_eq!(c.apply(0.0), 0.0);
            assert!(c.apply(0.5) < c.apply(1.0));
        }
        for h in [OuterMap::Sqrt, OuterMap::Identity] {
            assert_eq!(h.apply(0.0), 0.0);
            assert!(h.apply(0.5) < h.apply(1.0));
        }
    }

    #[test]
    fn invalid_matrix_rejected() {
        assert!(DissimilarityMatrix::from_rows(
            &[vec![0.0, 1.0], vec![2.0, 0.0]],
            MatrixKind::BasePhi
        )
        .is_err());
        assert!(DissimilarityMatrix::from_rows(
            &[vec![1.0, 1.0], vec![1.0, 0.0]],
            MatrixKind::BasePhi
        )
        .is_err());
        assert!(DissimilarityMatrix::from_rows(
            &[vec![0.0, -1.0], vec![-1.0, 0.0]],
            MatrixKind::BasePhi
        )
        .is_err());
    }
}
