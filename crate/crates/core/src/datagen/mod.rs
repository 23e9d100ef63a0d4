//! Seeded simulation scenarios with known class labels.

pub mod samplers;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::rng::{seeded_rng, StreamRng};
use samplers::{
    ar_process, ball_uniform, cube_uniform, ellipsoid_shell, half_annulus, heavy_tail,
    shell_radius, structured_gaussian, unit_direction, CovStructure, HeavyTail,
};

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Two correlated Gaussians differing in location and scale.
    A,
    /// Three uniform spherical shells with disjoint radii.
    B,
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6,
    Ex7,
    Ex8,
    /// Ex8 with standard Cauchy in place of t3.
    Ex8Cauchy,
    /// One population, uniform on the unit hypercube.
    NullUniform,
}

impl Scenario {
    pub const ALL: [Scenario; 12] = [
        Scenario::A,
        Scenario::B,
        Scenario::Ex1,
        Scenario::Ex2,
        Scenario::Ex3,
        Scenario::Ex4,
        Scenario::Ex5,
        Scenario::Ex6,
        Scenario::Ex7,
        Scenario::Ex8,
        Scenario::Ex8Cauchy,
        Scenario::NullUniform,
    ];

    /// Number of populations, i.e. the true number of clusters.
    pub fn classes(self) -> usize {
        match self {
            Scenario::NullUniform => 1,
            Scenario::A | Scenario::Ex5 | Scenario::Ex6 | Scenario::Ex8 | Scenario::Ex8Cauchy => 2,
            Scenario::B | Scenario::Ex1 | Scenario::Ex3 | Scenario::Ex4 => 3,
            Scenario::Ex2 | Scenario::Ex7 => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Scenario::A => "a",
            Scenario::B => "b",
            Scenario::Ex1 => "ex1",
            Scenario::Ex2 => "ex2",
            Scenario::Ex3 => "ex3",
            Scenario::Ex4 => "ex4",
            Scenario::Ex5 => "ex5",
            Scenario::Ex6 => "ex6",
            Scenario::Ex7 => "ex7",
            Scenario::Ex8 => "ex8",
            Scenario::Ex8Cauchy => "ex8-cauchy",
            Scenario::NullUniform => "null-uniform",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.tag() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario '{s}'")))
    }
}

/// Everything needed to regenerate one sample bit for bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub d: usize,
    /// Observations per class, in class order.
    pub sizes: Vec<usize>,
    pub seed: u64,
}

impl ScenarioSpec {
    pub const DESK_CLASS_SIZE: usize = 30;
    pub const NULL_SIZE: usize = 100;

    /// Default sizes: 30 per class, or 100 for the single-population null.
    pub fn desk(scenario: Scenario, d: usize, seed: u64) -> Self {
        Self::with_class_size(scenario, d, Self::DESK_CLASS_SIZE, seed)
    }

    /// `per_class` observations per class (the null scenario keeps 100).
    pub fn with_class_size(scenario: Scenario, d: usize, per_class: usize, seed: u64) -> Self {
        let sizes = match scenario {
            Scenario::NullUniform => vec![Self::NULL_SIZE],
            s => vec![per_class; s.classes()],
        };
        Self {
            scenario,
            d,
            sizes,
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {}", self.d)));
        }
        if self.sizes.len() != self.scenario.classes() {
            return Err(Error::DimensionMismatch {
                expected: self.scenario.classes(),
                got: self.sizes.len(),
            });
        }
        if let Some(&s) = self.sizes.iter().find(|&&s| s < 2) {
            return Err(Error::TooFewObservations { needed: 2, got: s });
        }
        Ok(())
    }
}

/// Generated data with its class labels (`1..=classes`).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub data: DataMatrix,
    pub labels: Vec<usize>,
    pub diagnostics: Vec<String>,
}

fn alternating(d: usize, even: f64, odd: f64) -> Vec<f64> {
    // 1-based position i: even i -> `even`
    (1..=d).map(|i| if i % 2 == 0 { even } else { odd }).collect()
}

fn rows_from<F>(n: usize, d: usize, rng: &mut StreamRng, mut draw: F) -> Result<Vec<f64>>
where
    F: FnMut(&mut StreamRng) -> Result<Vec<f64>>,
{
    let mut out = Vec::with_capacity(n * d);
    for _ in 0..n {
        let row = draw(rng)?;
        debug_assert_eq!(row.len(), d);
        out.extend(row);
    }
    Ok(out)
}

/// Draws the sample described by `spec`, class by class, from one ChaCha
/// stream seeded with `spec.seed`.
pub fn sample_scenario(spec: &ScenarioSpec) -> Result<LabeledSample> {
    spec.validate()?;
    let d = spec.d;
    let mut rng = seeded_rng(spec.seed);
    let mut diagnostics = Vec::new();
    let mut width = d;
    if d % 2 == 1 {
        match spec.scenario {
            Scenario::A => diagnostics.push(format!(
                "odd d={d}: {} correlated pairs, last coordinate uncorrelated",
                d / 2
            )),
            Scenario::Ex4 => {
                width = d - 1;
                diagnostics.push(format!("odd d={d}: generated {width} coordinates from {} planar draws", d / 2));
            }
            _ => {}
        }
    }
    let ar1 = CovStructure::Ar1(0.5);
    let mut values = Vec::with_capacity(spec.n() * width);
    let mut labels = Vec::with_capacity(spec.n());
    for (c, &size) in spec.sizes.iter().enumerate() {
        let class = c + 1;
        labels.extend(std::iter::repeat_n(class, size));
        let block: Vec<f64> = match spec.scenario {
            Scenario::A => {
                let (mean, scale) = if class == 1 {
                    (vec![0.0; d], 0.5)
                } else {
                    ((0..d).map(|q| if q % 2 == 0 { 1.0 } else { -1.0 }).collect(), 2.0)
                };
                structured_gaussian(size, d, &mean, &CovStructure::PairedBlock(0.98), scale, &mut rng)?
                    .values()
                    .to_vec()
            }
            Scenario::B => {
                let (a, b) = [(0.0, 0.5), (1.0, 1.5), (2.0, 2.5)][c];
                let root_d = (d as f64).sqrt();
                rows_from(size, d, &mut rng, |rng| {
                    let r = shell_radius(a, b, d, rng.random::<f64>())? * root_d;
                    Ok(unit_direction(d, rng).into_iter().map(|v| v * r).collect())
                })?
            }
            Scenario::Ex1 => {
                let shift = [0.0, 0.75, -0.75][c];
                let mean: Vec<f64> = (0..d).map(|q| if q < d / 2 { shift } else { 0.0 }).collect();
                structured_gaussian(size, d, &mean, &ar1, 1.0, &mut rng)?.values().to_vec()
            }
            Scenario::Ex2 => {
                let alpha = alternating(d, 1.0, 0.5);
                let beta: Vec<f64> = alpha
                    .iter()
                    .enumerate()
                    .map(|(q, a)| if (q + 1) % 2 == 0 { *a } else { -a })
                    .collect();
                let (mean, scale): (Vec<f64>, f64) = match class {
                    1 => (alpha, 1.0),
                    2 => (beta, 4.0),
                    3 => (alpha.iter().map(|v| -v).collect(), 1.0),
                    _ => (beta.iter().map(|v| -v).collect(), 4.0),
                };
                structured_gaussian(size, d, &mean, &ar1, scale, &mut rng)?.values().to_vec()
            }
            Scenario::Ex3 => rows_from(size, d, &mut rng, |rng| ellipsoid_shell(class, d, rng))?,
            Scenario::Ex4 => rows_from(size, width, &mut rng, |rng| {
                let mut row = Vec::with_capacity(width);
                for _ in 0..d / 2 {
                    row.extend(half_annulus(class, rng)?);
                }
                Ok(row)
            })?,
            Scenario::Ex5 => rows_from(size, d, &mut rng, |rng| ar_process(class, d, rng))?,
            Scenario::Ex6 => rows_from(size, d, &mut rng, |rng| {
                Ok(if class == 1 {
                    ball_uniform(d, rng)
                } else {
                    cube_uniform(d, rng)
                })
            })?,
            Scenario::Ex7 => {
                let half = d / 2;
                let var: Vec<f64> = match class {
                    1 => (0..d).map(|q| if q < half { 1.0 } else { 9.0 }).collect(),
                    2 => (0..d).map(|q| if q < half { 9.0 } else { 1.0 }).collect(),
                    3 => alternating(d, 1.0, 9.0),
                    _ => alternating(d, 9.0, 1.0),
                };
                structured_gaussian(size, d, &vec![0.0; d], &CovStructure::Diagonal(var), 1.0, &mut rng)?
                    .values()
                    .to_vec()
            }
            Scenario::Ex8 | Scenario::Ex8Cauchy => {
                if class == 1 {
                    structured_gaussian(size, d, &vec![0.0; d], &CovStructure::Diagonal(vec![1.0; d]), 3.0, &mut rng)?
                        .values()
                        .to_vec()
                } else {
                    let kind = if spec.scenario == Scenario::Ex8 {
                        HeavyTail::T3
                    } else {
                        HeavyTail::Cauchy
                    };
                    rows_from(size, d, &mut rng, |rng| Ok(heavy_tail(kind, d, rng)))?
                }
            }
            Scenario::NullUniform => rows_from(size, d, &mut rng, |rng| {
                Ok((0..d).map(|_| rng.random::<f64>()).collect())
            })?,
        };
        values.extend(block);
    }
    Ok(LabeledSample {
        data: DataMatrix::new(spec.n(), width, values)?,
        labels,
        diagnostics,
    })
}
