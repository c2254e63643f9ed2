//! Discretized strategy sets.
//!
//! A grid holds every `U(jΔθ, kΔφ, lΔα)` inside the parameter bounds
//! (endpoints included), with entrywise-identical matrices collapsed onto the
//! lexicographically first parameter triple. Matrices that differ only by a
//! global phase are kept apart.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ewl::{strategy_matrix, StrategyParams};
use crate::qmatrix::ComplexMatrix2;

/// Two grid matrices closer than this (max entrywise modulus) are the same strategy.
pub const DEDUP_TOL: f64 = 1e-9;

/// Step sizes `(Δθ, Δφ, Δα)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteppingParams {
    d_theta: f64,
    d_phi: f64,
    d_alpha: f64,
}

impl SteppingParams {
    pub fn new(d_theta: f64, d_phi: f64, d_alpha: f64) -> Result<Self> {
        check_step("d_theta", d_theta, PI)?;
        check_step("d_phi", d_phi, 2.0 * PI)?;
        check_step("d_alpha", d_alpha, 2.0 * PI)?;
        Ok(Self {
            d_theta,
            d_phi,
            d_alpha,
        })
    }

    /// `(π, π/2, π/2)`: the eight-strategy grid.
    pub fn coarse() -> Self {
        Self {
            d_theta: PI,
            d_phi: PI / 2.0,
            d_alpha: PI / 2.0,
        }
    }

    pub fn d_theta(&self) -> f64 {
        self.d_theta
    }

    pub fn d_phi(&self) -> f64 {
        self.d_phi
    }

    pub fn d_alpha(&self) -> f64 {
        self.d_alpha
    }

    pub fn as_tuple(&self) -> (f64, f64, f64) {
        (self.d_theta, self.d_phi, self.d_alpha)
    }
}

fn check_step(name: &'static str, value: f64, max: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value <= max {
        Ok(())
    } else {
        Err(Error::InvalidStep { name, value, max })
    }
}

/// Multiples `0, step, 2·step, …` up to and including `bound` when it is hit.
fn multiples(step: f64, bound: f64) -> impl Iterator<Item = f64> {
    let count = (bound / step + 1e-9).floor() as usize;
    (0..=count).map(move |j| (j as f64 * step).min(bound))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridEntry {
    pub params: StrategyParams,
    pub matrix: ComplexMatrix2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyGrid {
    entries: Vec<GridEntry>,
    steps: SteppingParams,
}

// Fixed irrational-ish weights for the 1-D projection used to bucket matrices.
const PROJECTION: [f64; 8] = [
    1.0,
    std::f64::consts::SQRT_2,
    1.732_050_807_568_877_2,
    2.236_067_977_499_79,
    2.645_751_311_064_590_7,
    3.316_624_790_355_4,
    3.605_551_275_463_989,
    4.123_105_625_617_661,
];
const BUCKET_WIDTH: f64 = 1e-6;

fn projection(m: &ComplexMatrix2) -> f64 {
    m.0.iter()
        .flatten()
        .flat_map(|z| [z.re, z.im])
        .zip(PROJECTION)
        .map(|(x, w)| x * w)
        .sum()
}

/// Index over retained matrices. Matrices within `DEDUP_TOL` have projections
/// within `DEDUP_TOL · Σw ≪ BUCKET_WIDTH`, so neighbours land in the same or
/// an adjacent bucket.
#[derive(Default)]
struct MatrixIndex {
    buckets: HashMap<i64, Vec<usize>>,
}

impl MatrixIndex {
    fn key(m: &ComplexMatrix2) -> i64 {
        (projection(m) / BUCKET_WIDTH).floor() as i64
    }

    fn find(&self, entries: &[GridEntry], m: &ComplexMatrix2) -> Option<usize> {
        let key = Self::key(m);
        (key - 1..=key + 1)
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .copied()
            .filter(|&i| entries[i].matrix.approx_eq(m, DEDUP_TOL))
            .min()
    }

    fn insert(&mut self, m: &ComplexMatrix2, index: usize) {
        self.buckets.entry(Self::key(m)).or_default().push(index);
    }
}

impl StrategyGrid {
    pub fn build(steps: SteppingParams) -> Self {
        let mut entries = Vec::new();
        let mut index = MatrixIndex::default();
        for theta in multiples(steps.d_theta, StrategyParams::THETA_MAX) {
            for phi in multiples(steps.d_phi, StrategyParams::PHI_MAX) {
                for alpha in multiples(steps.d_alpha, StrategyParams::ALPHA_MAX) {
                    let params = StrategyParams::new(theta, phi, alpha).expect("grid multiples are clamped into range");
                    let matrix = strategy_matrix(&params);
                    if index.find(&entries, &matrix).is_none() {
                        index.insert(&matrix, entries.len());
                        entries.push(GridEntry { params, matrix });
                    }
                }
            }
        }
        Self { entries, steps }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn steps(&self) -> SteppingParams {
        self.steps
    }

    pub fn entries(&self) -> &[GridEntry] {
        &self.entries
    }

    pub fn params(&self, index: usize) -> StrategyParams {
        self.entries[index].params
    }

    pub fn matrix(&self, index: usize) -> &ComplexMatrix2 {
        &self.entries[index].matrix
    }

    /// Index of the entry whose matrix equals `U(params)` within [`DEDUP_TOL`].
    pub fn lookup(&self, params: &StrategyParams) -> Option<usize> {
        let m = strategy_matrix(params);
        self.entries.iter().position(|e| e.matrix.approx_eq(&m, DEDUP_TOL))
    }
}
