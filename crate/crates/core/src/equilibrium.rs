//! Pure-strategy Nash equilibria over a strategy grid.
//!
//! Equilibria are found as the intersection of best-response sets. Best
//! responses are sets (argmax with ties within `epsilon`), never a single
//! argmax.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ewl::{Circuit, EntanglementParam, GameDefinition};
use crate::strategy_grid::{SteppingParams, StrategyGrid};

/// Default tie tolerance, in payoff units.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    A,
    B,
}

/// Expected payoffs for every (A strategy, B strategy) pair of a grid at one `γ`.
#[derive(Debug, Clone)]
pub struct PayoffTensor {
    game: GameDefinition,
    gamma: EntanglementParam,
    steps: SteppingParams,
    size: usize,
    values: Vec<(f64, f64)>,
}

impl PayoffTensor {
    /// Fills the table row by row (row = A's strategy) in parallel.
    pub fn build(game: &GameDefinition, grid: &StrategyGrid, gamma: EntanglementParam) -> Self {
        let n = grid.len();
        let circuit = Circuit::new(gamma);
        let mut values = vec![(0.0, 0.0); n * n];
        if n > 0 {
            values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                let ua = grid.matrix(i);
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = circuit.payoffs(ua, grid.matrix(j), game);
                }
            });
        }
        Self {
            game: game.clone(),
            gamma,
            steps: grid.steps(),
            size: n,
            values,
        }
    }

    pub fn game(&self) -> &GameDefinition {
        &self.game
    }

    pub fn gamma(&self) -> EntanglementParam {
        self.gamma
    }

    pub fn steps(&self) -> SteppingParams {
        self.steps
    }

    /// Number of strategies per player.
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> (f64, f64) {
        self.values[a * self.size + b]
    }

    #[inline]
    pub fn payoff_a(&self, a: usize, b: usize) -> f64 {
        self.get(a, b).0
    }

    #[inline]
    pub fn payoff_b(&self, a: usize, b: usize) -> f64 {
        self.get(a, b).1
    }

    fn row(&self, a: usize) -> &[(f64, f64)] {
        &self.values[a * self.size..(a + 1) * self.size]
    }

    /// Max over A's strategies of A's payoff, per B column.
    fn column_max_a(&self) -> Vec<f64> {
        let mut best = vec![f64::NEG_INFINITY; self.size];
        for a in 0..self.size {
            for (m, &(pa, _)) in best.iter_mut().zip(self.row(a)) {
                *m = m.max(pa);
            }
        }
        best
    }

    fn row_max_b(&self, a: usize) -> f64 {
        self.row(a).iter().map(|&(_, pb)| pb).fold(f64::NEG_INFINITY, f64::max)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.size != other.size || self.steps != other.steps {
            return Err(Error::TensorMismatch(format!(
                "built on different grids ({} vs {} strategies)",
                self.size, other.size
            )));
        }
        if self.gamma != other.gamma {
            return Err(Error::TensorMismatch(format!(
                "built at different gamma ({} vs {})",
                self.gamma.value(),
                other.gamma.value()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseSet {
    pub responder: Player,
    pub opponent_index: usize,
    pub best_indices: Vec<usize>,
    pub best_value: f64,
}

/// For each opponent strategy, the responder's strategies within `epsilon` of the best payoff.
pub fn best_responses(tensor: &PayoffTensor, responder: Player, epsilon: f64) -> Vec<BestResponseSet> {
    let n = tensor.size();
    (0..n)
        .map(|opp| {
            let payoff = |own: usize| match responder {
                Player::A => tensor.payoff_a(own, opp),
                Player::B => tensor.payoff_b(opp, own),
            };
            let best_value = (0..n).map(payoff).fold(f64::NEG_INFINITY, f64::max);
            let best_indices = (0..n).filter(|&own| payoff(own) >= best_value - epsilon).collect();
            BestResponseSet {
                responder,
                opponent_index: opp,
                best_indices,
                best_value,
            }
        })
        .collect()
}

/// A pure-strategy equilibrium.
///
/// Two-player: indices `(a, b)`, payoffs `(A, B)`. Bayesian: indices
/// `(a, b1, b2)`, payoffs `(A's prior-weighted payoff, B1, B2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NashEquilibrium {
    pub strategy_indices: Vec<usize>,
    pub payoffs: Vec<f64>,
}

impl NashEquilibrium {
    pub fn payoff_a(&self) -> f64 {
        self.payoffs[0]
    }

    pub fn payoff_b(&self) -> f64 {
        self.payoffs[1]
    }

    pub fn is_bayesian(&self) -> bool {
        self.strategy_indices.len() == 3
    }
}

/// All `(a, b)` with `a` a best response to `b` and `b` a best response to
/// `a`, in lexicographic order.
pub fn nash_two_player(tensor: &PayoffTensor, epsilon: f64) -> Vec<NashEquilibrium> {
    let col_max = tensor.column_max_a();
    (0..tensor.size())
        .into_par_iter()
        .flat_map_iter(|a| {
            let row_max = tensor.row_max_b(a);
            let col_max = &col_max;
            tensor
                .row(a)
                .iter()
                .enumerate()
                .filter(move |&(b, &(pa, pb))| pa >= col_max[b] - epsilon && pb >= row_max - epsilon)
                .map(move |(b, &(pa, pb))| NashEquilibrium {
                    strategy_indices: vec![a, b],
                    payoffs: vec![pa, pb],
                })
        })
        .collect()
}

/// Prior weight `p` on the first opponent type.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PriorProbability(f64);

impl PriorProbability {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFinite { name: "p", value: p });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self(p))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

#[inline]
fn mixed_a(t1: &PayoffTensor, t2: &PayoffTensor, a: usize, b1: usize, b2: usize, p: f64) -> f64 {
    p * t1.payoff_a(a, b1) + (1.0 - p) * t2.payoff_a(a, b2)
}

/// A's payoff against the type mixture: `p·$A(a,b1) + (1−p)·$A(a,b2)`.
pub fn bayesian_payoff_a(
    t1: &PayoffTensor,
    t2: &PayoffTensor,
    a: usize,
    b1: usize,
    b2: usize,
    p: PriorProbability,
) -> Result<f64> {
    t1.check_compatible(t2)?;
    Ok(mixed_a(t1, t2, a, b1, b2, p.value()))
}

fn best_set_b(tensor: &PayoffTensor, a: usize, epsilon: f64) -> Vec<usize> {
    let best = tensor.row_max_b(a);
    tensor
        .row(a)
        .iter()
        .enumerate()
        .filter(|&(_, &(_, pb))| pb >= best - epsilon)
        .map(|(b, _)| b)
        .collect()
}

/// Equilibria `(a, b1, b2)` of the three-player Bayesian composition.
///
/// For each `a`, the candidate `(b1, b2)` pairs are the product of B1's and
/// B2's best-response sets against `a`; `a` is then checked against A's
/// best payoff over the whole grid for that pair.
pub fn nash_bayesian(
    t1: &PayoffTensor,
    t2: &PayoffTensor,
    p: PriorProbability,
    epsilon: f64,
) -> Result<Vec<NashEquilibrium>> {
    t1.check_compatible(t2)?;
    let n = t1.size();
    let p = p.value();
    let found = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let set1 = best_set_b(t1, a, epsilon);
            let set2 = best_set_b(t2, a, epsilon);
            let mut out = Vec::new();
            for &b1 in &set1 {
                for &b2 in &set2 {
                    let value = mixed_a(t1, t2, a, b1, b2, p);
                    let is_best = (0..n).all(|alt| mixed_a(t1, t2, alt, b1, b2, p) <= value + epsilon);
                    if is_best {
                        out.push(NashEquilibrium {
                            strategy_indices: vec![a, b1, b2],
                            payoffs: vec![value, t1.payoff_b(a, b1), t2.payoff_b(a, b2)],
                        });
                    }
                }
            }
            out
        })
        .collect();
    Ok(found)
}

/// Equilibria sharing a payoff vector (within `tol` per component).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffClass {
    pub payoffs: Vec<f64>,
    pub members: Vec<usize>,
}

/// Groups equilibria by payoff vector, classes in order of first appearance.
pub fn group_by_payoffs(equilibria: &[NashEquilibrium], tol: f64) -> Vec<PayoffClass> {
    let mut classes: Vec<PayoffClass> = Vec::new();
    for (k, eq) in equilibria.iter().enumerate() {
        let same = |c: &&mut PayoffClass| {
            c.payoffs.len() == eq.payoffs.len() && c.payoffs.iter().zip(&eq.payoffs).all(|(x, y)| (x - y).abs() <= tol)
        };
        match classes.iter_mut().find(|c| same(c)) {
            Some(class) => class.members.push(k),
            None => classes.push(PayoffClass {
                payoffs: eq.payoffs.clone(),
                members: vec![k],
            }),
        }
    }
    classes
}
