//! Equilibrium sweeps over entanglement and prior probability, plus the
//! projections used for plotting (branches, θ scatter, payoff histograms).

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::equilibrium::{
    group_by_payoffs, nash_bayesian, nash_two_player, NashEquilibrium, PayoffTensor, PriorProbability,
};
use crate::error::{Error, Result};
use crate::ewl::{EntanglementParam, GameDefinition, StrategyParams};
use crate::strategy_grid::StrategyGrid;

pub const DEFAULT_GAMMA_POINTS: usize = 65;
pub const DEFAULT_P_POINTS: usize = 21;
pub const DEFAULT_BIN_WIDTH: f64 = 0.05;

/// Grids up to this size sweep their γ points concurrently; larger grids
/// build one tensor at a time to bound memory.
const CONCURRENT_GAMMA_MAX_GRID: usize = 512;

/// Records whose γ lies within this distance of a requested slice belong to it.
const SLICE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    pub p: Option<f64>,
    pub equilibrium: NashEquilibrium,
    pub strategy_params: Vec<StrategyParams>,
}

impl SweepRecord {
    pub fn payoff_a(&self) -> f64 {
        self.equilibrium.payoff_a()
    }

    pub fn theta_a(&self) -> f64 {
        self.strategy_params[0].theta()
    }

    pub fn theta_b(&self) -> f64 {
        self.strategy_params[1].theta()
    }
}

/// The output of a sweep: the evaluated points and every equilibrium found,
/// ordered by `(γ, p, strategy indices)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub gamma_points: Vec<f64>,
    pub p_points: Option<Vec<f64>>,
    pub records: Vec<SweepRecord>,
}

impl Sweep {
    pub fn records_at(&self, gamma: f64) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(move |r| r.gamma == gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalBracket {
    pub last_gamma_with: f64,
    pub first_gamma_without: f64,
    pub branch_payoff_at_last: (f64, f64),
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; both ends are exact.
pub fn uniform_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * t
                }
            })
            .collect(),
    }
}

pub fn gamma_points(n: usize) -> Vec<f64> {
    uniform_points(0.0, FRAC_PI_2, n)
}

pub fn p_points(n: usize) -> Vec<f64> {
    uniform_points(0.0, 1.0, n)
}

fn check_points<T>(what: &'static str, points: &[f64], make: impl Fn(f64) -> Result<T>) -> Result<Vec<T>> {
    if points.is_empty() || points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadPointList(what));
    }
    points.iter().map(|&x| make(x)).collect()
}

fn records_for(grid: &StrategyGrid, gamma: f64, p: Option<f64>, eqs: Vec<NashEquilibrium>) -> Vec<SweepRecord> {
    eqs.into_iter()
        .map(|equilibrium| SweepRecord {
            gamma,
            p,
            strategy_params: equilibrium.strategy_indices.iter().map(|&i| grid.params(i)).collect(),
            equilibrium,
        })
        .collect()
}

/// Two-player equilibria at each `γ`; points without equilibria contribute no records.
pub fn gamma_sweep(game: &GameDefinition, grid: &StrategyGrid, gamma_points: &[f64], epsilon: f64) -> Result<Sweep> {
    let gammas = check_points("gamma", gamma_points, EntanglementParam::new)?;
    let solve = |gamma: &EntanglementParam| {
        let tensor = PayoffTensor::build(game, grid, *gamma);
        records_for(grid, gamma.value(), None, nash_two_player(&tensor, epsilon))
    };
    let per_gamma: Vec<Vec<SweepRecord>> = if grid.len() <= CONCURRENT_GAMMA_MAX_GRID {
        gammas.par_iter().map(solve).collect()
    } else {
        gammas.iter().map(solve).collect()
    };
    Ok(Sweep {
        gamma_points: gamma_points.to_vec(),
        p_points: None,
        records: per_gamma.into_iter().flatten().collect(),
    })
}

/// Bayesian equilibria over the `(γ, p)` product grid, with `p` the weight on `game1`.
pub fn bayes_sweep(
    game1: &GameDefinition,
    game2: &GameDefinition,
    grid: &StrategyGrid,
    gamma_points: &[f64],
    p_points: &[f64],
    epsilon: f64,
) -> Result<Sweep> {
    let gammas = check_points("gamma", gamma_points, EntanglementParam::new)?;
    let priors = check_points("p", p_points, PriorProbability::new)?;
    let mut records = Vec::new();
    for gamma in gammas {
        let t1 = PayoffTensor::build(game1, grid, gamma);
        let t2 = PayoffTensor::build(game2, grid, gamma);
        let per_p = priors
            .par_iter()
            .map(|&p| {
                nash_bayesian(&t1, &t2, p, epsilon).map(|eqs| records_for(grid, gamma.value(), Some(p.value()), eqs))
            })
            .collect::<Result<Vec<_>>>()?;
        records.extend(per_p.into_iter().flatten());
    }
    Ok(Sweep {
        gamma_points: gamma_points.to_vec(),
        p_points: Some(p_points.to_vec()),
        records,
    })
}

/// The adjacent pair of sweep points where the selected branch first stops
/// appearing. `None` if the branch never appears or persists to the last point.
pub fn critical_gamma(sweep: &Sweep, selector: impl Fn(&SweepRecord) -> bool) -> Option<CriticalBracket> {
    let selected_at = |gamma: f64| sweep.records_at(gamma).find(|r| selector(r));
    let present: Vec<bool> = sweep.gamma_points.iter().map(|&g| selected_at(g).is_some()).collect();
    let first = present.iter().position(|&x| x)?;
    let gone = first + present[first..].iter().position(|&x| !x)?;
    let last_gamma_with = sweep.gamma_points[gone - 1];
    let rec = selected_at(last_gamma_with)?;
    Some(CriticalBracket {
        last_gamma_with,
        first_gamma_without: sweep.gamma_points[gone],
        branch_payoff_at_last: (rec.equilibrium.payoffs[0], rec.equilibrium.payoffs[1]),
    })
}

/// A distinct equilibrium payoff vector at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub gamma: f64,
    pub p: Option<f64>,
    pub payoffs: Vec<f64>,
    pub multiplicity: usize,
}

/// Collapses records at each `(γ, p)` into payoff-vector classes.
pub fn payoff_branches(records: &[SweepRecord], tol: f64) -> Vec<BranchPoint> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let key = (records[start].gamma, records[start].p);
        let len = records[start..].iter().take_while(|r| (r.gamma, r.p) == key).count();
        let eqs: Vec<NashEquilibrium> = records[start..start + len]
            .iter()
            .map(|r| r.equilibrium.clone())
            .collect();
        out.extend(group_by_payoffs(&eqs, tol).into_iter().map(|c| BranchPoint {
            gamma: key.0,
            p: key.1,
            payoffs: c.payoffs,
            multiplicity: c.members.len(),
        }));
        start += len;
    }
    out
}

/// `(θ_A, θ_B)` of every record.
pub fn scatter_theta(records: &[SweepRecord]) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.theta_a(), r.theta_b())).collect()
}

/// `(θ_A, payoff_A)` of every record.
pub fn theta_vs_payoff(records: &[SweepRecord]) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.theta_a(), r.payoff_a())).collect()
}

pub fn records_in_slice(records: &[SweepRecord], gamma: f64) -> Vec<SweepRecord> {
    records
        .iter()
        .filter(|r| (r.gamma - gamma).abs() <= SLICE_TOL)
        .cloned()
        .collect()
}

/// Counts of A's payoffs at `gamma_slice`, binned as `[k·w, (k+1)·w)`.
/// Returns `(bin_center, count)` for non-empty bins in ascending order.
pub fn payoff_histogram(records: &[SweepRecord], gamma_slice: f64, bin_width: f64) -> Result<Vec<(f64, usize)>> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::BadBinWidth(bin_width));
    }
    let mut bins: BTreeMap<i64, usize> = BTreeMap::new();
    for r in records.iter().filter(|r| (r.gamma - gamma_slice).abs() <= SLICE_TOL) {
        *bins.entry((r.payoff_a() / bin_width).floor() as i64).or_default() += 1;
    }
    Ok(bins
        .into_iter()
        .map(|(k, count)| ((k as f64 + 0.5) * bin_width, count))
        .collect())
}

/// The point of `points` closest to `x`, or `None` if `x` lies outside their range.
pub fn nearest_point(points: &[f64], x: f64) -> Option<f64> {
    let (lo, hi) = (*points.first()?, *points.last()?);
    if x < lo - SLICE_TOL || x > hi + SLICE_TOL {
        return None;
    }
    points
        .iter()
        .copied()
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
}
