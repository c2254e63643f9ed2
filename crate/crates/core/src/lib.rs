//! Solver for EWL-quantized two-player games and their Bayesian three-player
//! compositions.
//!
//! The pipeline is: build a [`StrategyGrid`] from step sizes, tabulate a
//! [`PayoffTensor`] per game and entanglement value, then intersect
//! best-response sets to enumerate pure-strategy Nash equilibria. The
//! [`sweep`] module repeats this across `γ` (and prior `p`) grids.
//!
//! ```
//! use qgame_core::{nash_two_player, EntanglementParam, GameDefinition, PayoffTensor,
//!     SteppingParams, StrategyGrid, DEFAULT_EPSILON};
//!
//! let grid = StrategyGrid::build(SteppingParams::coarse());
//! let pd = GameDefinition::prisoners_dilemma();
//! let tensor = PayoffTensor::build(&pd, &grid, EntanglementParam::ZERO);
//! let equilibria = nash_two_player(&tensor, DEFAULT_EPSILON);
//! assert!(equilibria.iter().all(|e| (e.payoff_a() - 1.0).abs() < 1e-9));
//! ```

pub mod equilibrium;
pub mod error;
pub mod ewl;
pub mod qmatrix;
pub mod strategy_grid;
pub mod sweep;

pub use equilibrium::{
    bayesian_payoff_a, best_responses, group_by_payoffs, nash_bayesian, nash_two_player, BestResponseSet,
    NashEquilibrium, PayoffClass, PayoffTensor, Player, PriorProbability, DEFAULT_EPSILON,
};
pub use error::{Error, Result};
pub use ewl::{
    entangler, expected_payoffs, final_state, outcome_probs, strategy_matrix, Circuit, EntanglementParam,
    GameDefinition, StrategyParams,
};
pub use qmatrix::{kron, Complex, ComplexMatrix2, ComplexMatrix4, StateVector4};
pub use strategy_grid::{GridEntry, SteppingParams, StrategyGrid};
pub use sweep::{
    bayes_sweep, critical_gamma, gamma_sweep, payoff_branches, payoff_histogram, scatter_theta, theta_vs_payoff,
    CriticalBracket, Sweep, SweepRecord,
};
