//! Primitive samplers. Every routine takes the caller's RNG so that a whole
//! scenario is reproducible from one seed.

use rand::Rng;
use rand_distr::{Cauchy, Distribution, StandardNormal, StudentT};

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Inverse CDF of the radius of a uniform point in the `d`-dimensional shell
/// `a <= |x| <= b`: `b * (u + (1-u) (a/b)^d)^(1/d)`, evaluated in log space.
pub fn shell_radius(a: f64, b: f64, d: usize, u: f64) -> Result<f64> {
    if !(0.0 <= a && a < b) || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "shell needs 0 <= a < b and d >= 1, got a={a}, b={b}, d={d}"
        )));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidParameter(format!("u must lie in [0, 1], got {u}")));
    }
    let dd = d as f64;
    let ratio_pow = if a == 0.0 { 0.0 } else { (dd * (a / b).ln()).exp() };
    let inner = u + (1.0 - u) * ratio_pow;
    let r = b * (inner.ln() / dd).exp();
    Ok(r.clamp(a, b))
}

/// Standard normal vector of length `d`.
pub fn standard_normal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform direction on the unit sphere in `d` dimensions.
pub fn unit_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let z = standard_normal(d, rng);
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            return z.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Gaussian covariance shapes with closed-form Cholesky factors.
#[derive(Debug, Clone, PartialEq)]
pub enum CovStructure {
    /// `Sigma_ij = rho^|i-j|`.
    Ar1(f64),
    /// Unit variances; coordinates `(2i-1, 2i)` correlated by `rho`, blocks
    /// independent, a trailing odd coordinate uncorrelated.
    PairedBlock(f64),
    /// Independent coordinates with these variances.
    Diagonal(Vec<f64>),
}

impl CovStructure {
    fn validate(&self, d: usize) -> Result<()> {
        match self {
            CovStructure::Ar1(r) | CovStructure::PairedBlock(r) if !(r.abs() < 1.0) => Err(
                Error::InvalidParameter(format!("correlation {r} gives a singular covariance")),
            ),
            CovStructure::Diagonal(v) if v.len() != d => Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            }),
            CovStructure::Diagonal(v) if v.iter().any(|x| !(*x > 0.0) || !x.is_finite()) => Err(
                Error::InvalidParameter("diagonal variances must be positive".into()),
            ),
            _ => Ok(()),
        }
    }

    /// `L z` where `L L' = Sigma`, in place.
    pub fn apply_factor(&self, z: &mut [f64]) {
        match self {
            CovStructure::Ar1(r) => {
                let c = (1.0 - r * r).sqrt();
                for t in 1..z.len() {
                    z[t] = r * z[t - 1] + c * z[t];
                }
            }
            CovStructure::PairedBlock(r) => {
                let c = (1.0 - r * r).sqrt();
                for pair in z.chunks_exact_mut(2) {
                    pair[1] = r * pair[0] + c * pair[1];
                }
            }
            CovStructure::Diagonal(v) => {
                for (x, s) in z.iter_mut().zip(v) {
                    *x *= s.sqrt();
                }
            }
        }
    }
}

/// `n` draws from `N(mean, scale * Sigma)`; `scale` multiplies the covariance.
pub fn structured_gaussian<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    mean: &[f64],
    cov: &CovStructure,
    scale: f64,
    rng: &mut R,
) -> Result<DataMatrix> {
    if mean.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: mean.len(),
        });
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    cov.validate(d)?;
    let sd = scale.sqrt();
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        let mut z = standard_normal(d, rng);
        cov.apply_factor(&mut z);
        values.extend(z.iter().zip(mean).map(|(x, m)| m + sd * x));
    }
    DataMatrix::new(n, d, values)
}

/// Uniform point in `{x : i-1 <= x' Sigma^-1 x <= i - 1/2}` with
/// `Sigma_jk = 0.5^|j-k|`.
pub fn ellipsoid_shell<R: Rng + ?Sized>(i: usize, d: usize, rng: &mut R) -> Result<Vec<f64>> {
    if i == 0 {
        return Err(Error::InvalidParameter("shell index starts at 1".into()));
    }
    let a = ((i - 1) as f64).sqrt();
    let b = (i as f64 - 0.5).sqrt();
    let r = shell_radius(a, b, d, rng.random::<f64>())?;
    let mut x: Vec<f64> = unit_direction(d, rng).into_iter().map(|v| v * r).collect();
    CovStructure::Ar1(0.5).apply_factor(&mut x);
    Ok(x)
}

/// The three planar half annuli: `1` and `2` are the upper halves of the
/// rings `1 <= r <= 1.5` around `(2, 0)` and `(-2, 0)`; `3` is the lower half
/// of the ring `4 <= r <= 4.5` around the origin.
pub fn half_annulus<R: Rng + ?Sized>(which: usize, rng: &mut R) -> Result<[f64; 2]> {
    let (cx, lo, hi, upper) = match which {
        1 => (2.0, 1.0, 1.5, true),
        2 => (-2.0, 1.0, 1.5, true),
        3 => (0.0, 4.0, 4.5, false),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "half annulus index must be 1, 2 or 3, got {which}"
            )))
        }
    };
    // area element r dr: radius by inverting the CDF (r^2 - lo^2)/(hi^2 - lo^2)
    let u: f64 = rng.random();
    let r = (lo * lo + u * (hi * hi - lo * lo)).sqrt();
    let theta = std::f64::consts::PI * rng.random::<f64>();
    let y = r * theta.sin();
    Ok([cx + r * theta.cos(), if upper { y } else { -y }])
}

/// Uniform point in the unit ball.
pub fn ball_uniform<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let u: f64 = rng.random();
    let r = (u.ln() / d as f64).exp();
    unit_direction(d, rng).into_iter().map(|v| v * r).collect()
}

/// Uniform point in the cube `[-1/sqrt(d), 1/sqrt(d)]^d` inscribed in the unit ball.
pub fn cube_uniform<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let h = 1.0 / (d as f64).sqrt();
    (0..d).map(|_| rng.random_range(-h..=h)).collect()
}

/// Stationary AR(1) path `X_t = c + phi X_{t-1} + e_t`, `t = 1..=d`, with
/// `X_0` drawn from the stationary law. Process `1` has `(c, phi) = (0.75,
/// 0.25)`, process `2` has `(0.25, 0.75)`; both have stationary mean 1.
pub fn ar_process<R: Rng + ?Sized>(which: usize, d: usize, rng: &mut R) -> Result<Vec<f64>> {
    let (c, phi): (f64, f64) = match which {
        1 => (0.75, 0.25),
        2 => (0.25, 0.75),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "AR process index must be 1 or 2, got {which}"
            )))
        }
    };
    let mean = c / (1.0 - phi);
    let sd0 = (1.0 / (1.0 - phi * phi)).sqrt();
    let mut x = mean + sd0 * rng.sample::<f64, _>(StandardNormal);
    Ok((0..d)
        .map(|_| {
            x = c + phi * x + rng.sample::<f64, _>(StandardNormal);
            x
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeavyTail {
    /// Student t with 3 degrees of freedom (variance 3).
    T3,
    /// Standard Cauchy.
    Cauchy,
}

/// `d` i.i.d. heavy-tailed coordinates.
pub fn heavy_tail<R: Rng + ?Sized>(kind: HeavyTail, d: usize, rng: &mut R) -> Vec<f64> {
    match kind {
        HeavyTail::T3 => {
            let t = StudentT::new(3.0).expect("valid degrees of freedom");
            (0..d).map(|_| t.sample(rng)).collect()
        }
        HeavyTail::Cauchy => {
            let c = Cauchy::new(0.0, 1.0).expect("valid scale");
            (0..d).map(|_| c.sample(rng)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    #[test]
    fn radius_endpoints() {
        assert_eq!(shell_radius(1.0, 1.5, 7, 1.0).unwrap(), 1.5);
        assert_eq!(shell_radius(1.0, 1.5, 7, 0.0).unwrap(), 1.0);
        assert!((shell_radius(0.0, 2.0, 1, 0.3).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(shell_radius(0.0, 2.0, 5, 0.0).unwrap(), 0.0);
        let r = shell_radius(1.0, 1.5, 5000, 0.5).unwrap();
        assert!((1.0..=1.5).contains(&r));
        assert!(shell_radius(2.0, 1.0, 3, 0.5).is_err());
        assert!(shell_radius(1.0, 1.0, 3, 0.5).is_err());
    }

    #[test]
    fn annulus_membership() {
        let mut rng = seeded_rng(3);
        for which in 1..=3 {
            for _ in 0..2000 {
                let [x, y] = half_annulus(which, &mut rng).unwrap();
                let (cx, lo, hi) = [(2.0, 1.0, 1.5), (-2.0, 1.0, 1.5), (0.0, 4.0, 4.5)][which - 1];
                let r = ((x - cx).powi(2) + y * y).sqrt();
                assert!(r >= lo - 1e-12 && r <= hi + 1e-12);
                assert!(if which == 3 { y <= 0.0 } else { y >= 0.0 });
            }
        }
        assert!(half_annulus(4, &mut rng).is_err());
    }

    #[test]
    fn ball_and_cube_regions() {
        let mut rng = seeded_rng(5);
        for _ in 0..500 {
            let b = ball_uniform(20, &mut rng);
            assert!(b.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12);
            let c = cube_uniform(20, &mut rng);
            assert!(c.iter().all(|v| v.abs() <= 1.0 / 20f64.sqrt()));
        }
    }

    #[test]
    fn bad_covariances() {
        let mut rng = seeded_rng(0);
        assert!(structured_gaussian(2, 2, &[0.0; 2], &CovStructure::Ar1(1.0), 1.0, &mut rng).is_err());
        let diag = CovStructure::Diagonal(vec![1.0, -1.0]);
        assert!(structured_gaussian(2, 2, &[0.0; 2], &diag, 1.0, &mut rng).is_err());
        assert!(structured_gaussian(2, 3, &[0.0; 2], &CovStructure::Ar1(0.5), 1.0, &mut rng).is_err());
    }
}
