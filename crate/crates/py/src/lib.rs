//! Python module `qgame`: strategy grids, EWL circuits, equilibrium search
//! and sweeps.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use qgame_cli::{CatalogueError, GameCatalogue};
use qgame_core as core;

fn value_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn catalogue_err(e: CatalogueError) -> PyErr {
    match e {
        CatalogueError::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn matrix2(m: &core::ComplexMatrix2) -> Vec<Vec<Complex64>> {
    m.0.iter().map(|r| r.to_vec()).collect()
}

#[pyclass(name = "StrategyParams", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct PyStrategyParams(core::StrategyParams);

#[pymethods]
impl PyStrategyParams {
    #[new]
    fn new(theta: f64, phi: f64, alpha: f64) -> PyResult<Self> {
        core::StrategyParams::new(theta, phi, alpha)
            .map(Self)
            .map_err(value_err)
    }

    /// The classical "cooperate" move, U(0, 0, 0).
    #[staticmethod]
    fn identity() -> Self {
        Self(core::StrategyParams::IDENTITY)
    }

    /// The classical "defect" move, U(π, 0, π/2).
    #[staticmethod]
    fn defect() -> Self {
        Self(core::StrategyParams::CLASSICAL_DEFECT)
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix2(&core::strategy_matrix(&self.0))
    }

    fn __repr__(&self) -> String {
        let (t, p, a) = self.0.as_tuple();
        format!("StrategyParams(theta={t}, phi={p}, alpha={a})")
    }
}

#[pyclass(name = "GameDefinition", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGame(core::GameDefinition);

#[pymethods]
impl PyGame {
    #[new]
    fn new(name: String, payoff_a: [f64; 4], payoff_b: [f64; 4]) -> PyResult<Self> {
        core::GameDefinition::new(name, payoff_a, payoff_b)
            .map(Self)
            .map_err(value_err)
    }

    #[staticmethod]
    fn prisoners_dilemma() -> Self {
        Self(core::GameDefinition::prisoners_dilemma())
    }

    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn payoff_a(&self) -> [f64; 4] {
        self.0.payoff_a
    }

    #[getter]
    fn payoff_b(&self) -> [f64; 4] {
        self.0.payoff_b
    }

    fn __repr__(&self) -> String {
        format!(
            "GameDefinition({:?}, {:?}, {:?})",
            self.0.name, self.0.payoff_a, self.0.payoff_b
        )
    }
}

#[pyclass(name = "StrategyGrid", frozen)]
struct PyGrid(core::StrategyGrid);

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (d_theta = PI, d_phi = FRAC_PI_2, d_alpha = FRAC_PI_2))]
    fn new(py: Python<'_>, d_theta: f64, d_phi: f64, d_alpha: f64) -> PyResult<Self> {
        let steps = core::SteppingParams::new(d_theta, d_phi, d_alpha).map_err(value_err)?;
        Ok(Self(py.detach(|| core::StrategyGrid::build(steps))))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn steps(&self) -> (f64, f64, f64) {
        self.0.steps().as_tuple()
    }

    fn params(&self, index: usize) -> PyResult<PyStrategyParams> {
        self.0
            .entries()
            .get(index)
            .map(|e| PyStrategyParams(e.params))
            .ok_or_else(|| PyValueError::new_err(format!("index {index} out of range for {} strategies", self.0.len())))
    }

    /// `(theta, phi, alpha)` of every strategy, in grid order.
    fn triples(&self) -> Vec<(f64, f64, f64)> {
        self.0.entries().iter().map(|e| e.params.as_tuple()).collect()
    }

    fn index_of(&self, params: PyRef<'_, PyStrategyParams>) -> Option<usize> {
        self.0.lookup(&params.0)
    }
}

#[pyclass(name = "Equilibrium", frozen, get_all)]
struct PyEquilibrium {
    gamma: f64,
    p: Option<f64>,
    strategy_indices: Vec<usize>,
    payoffs: Vec<f64>,
    strategies: Vec<(f64, f64, f64)>,
}

#[pymethods]
impl PyEquilibrium {
    fn __repr__(&self) -> String {
        format!(
            "Equilibrium(gamma={}, p={:?}, strategy_indices={:?}, payoffs={:?})",
            self.gamma, self.p, self.strategy_indices, self.payoffs
        )
    }
}

impl From<&core::SweepRecord> for PyEquilibrium {
    fn from(r: &core::SweepRecord) -> Self {
        Self {
            gamma: r.gamma,
            p: r.p,
            strategy_indices: r.equilibrium.strategy_indices.clone(),
            payoffs: r.equilibrium.payoffs.clone(),
            strategies: r.strategy_params.iter().map(|s| s.as_tuple()).collect(),
        }
    }
}

#[pyclass(name = "Sweep", frozen)]
struct PySweep(core::Sweep);

#[pymethods]
impl PySweep {
    #[getter]
    fn gamma_points(&self) -> Vec<f64> {
        self.0.gamma_points.clone()
    }

    #[getter]
    fn p_points(&self) -> Option<Vec<f64>> {
        self.0.p_points.clone()
    }

    #[getter]
    fn records(&self) -> Vec<PyEquilibrium> {
        self.0.records.iter().map(PyEquilibrium::from).collect()
    }

    fn __len__(&self) -> usize {
        self.0.records.len()
    }

    /// Distinct payoff vectors at each sweep point: `(gamma, p, payoffs, multiplicity)`.
    #[pyo3(signature = (tol = 1e-9))]
    fn branches(&self, tol: f64) -> Vec<(f64, Option<f64>, Vec<f64>, usize)> {
        core::payoff_branches(&self.0.records, tol)
            .into_iter()
            .map(|b| (b.gamma, b.p, b.payoffs, b.multiplicity))
            .collect()
    }

    /// The adjacent γ points where equilibria matching `payoffs` (all of them
    /// when omitted) stop appearing, with the payoffs at the last point.
    #[pyo3(signature = (payoffs = None, tol = 1e-9))]
    fn critical_gamma(&self, payoffs: Option<Vec<f64>>, tol: f64) -> Option<(f64, f64, (f64, f64))> {
        let selector = |r: &core::SweepRecord| match &payoffs {
            None => true,
            Some(want) => {
                want.len() == r.equilibrium.payoffs.len()
                    && want
                        .iter()
                        .zip(&r.equilibrium.payoffs)
                        .all(|(a, b)| (a - b).abs() <= tol)
            }
        };
        core::critical_gamma(&self.0, selector)
            .map(|b| (b.last_gamma_with, b.first_gamma_without, b.branch_payoff_at_last))
    }
}

fn to_gamma(value: f64) -> PyResult<core::EntanglementParam> {
    core::EntanglementParam::new(value).map_err(value_err)
}

#[pyfunction]
fn entangler(gamma: f64) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(core::entangler(to_gamma(gamma)?).0.iter().map(|r| r.to_vec()).collect())
}

#[pyfunction]
fn strategy_matrix(params: PyRef<'_, PyStrategyParams>) -> Vec<Vec<Complex64>> {
    params.matrix()
}

#[pyfunction]
fn final_state(gamma: f64, a: PyRef<'_, PyStrategyParams>, b: PyRef<'_, PyStrategyParams>) -> PyResult<Vec<Complex64>> {
    Ok(core::final_state(to_gamma(gamma)?, &a.0, &b.0).0.to_vec())
}

#[pyfunction]
fn outcome_probs(state: [Complex64; 4]) -> [f64; 4] {
    core::outcome_probs(&core::StateVector4(state))
}

#[pyfunction]
fn expected_payoffs(probs: [f64; 4], game: PyRef<'_, PyGame>) -> (f64, f64) {
    core::expected_payoffs(&probs, &game.0)
}

#[pyfunction]
#[pyo3(signature = (game, grid, gamma, epsilon = core::DEFAULT_EPSILON))]
fn nash_two_player(
    py: Python<'_>,
    game: PyRef<'_, PyGame>,
    grid: PyRef<'_, PyGrid>,
    gamma: f64,
    epsilon: f64,
) -> PyResult<Vec<PyEquilibrium>> {
    let (game, grid) = (&game.0, &grid.0);
    let sweep = py
        .detach(|| core::gamma_sweep(game, grid, &[gamma], epsilon))
        .map_err(value_err)?;
    Ok(sweep.records.iter().map(PyEquilibrium::from).collect())
}

/// Equilibria of the mixture putting weight `p` on `game1`.
#[pyfunction]
#[pyo3(signature = (game1, game2, grid, gamma, p, epsilon = core::DEFAULT_EPSILON))]
fn nash_bayesian(
    py: Python<'_>,
    game1: PyRef<'_, PyGame>,
    game2: PyRef<'_, PyGame>,
    grid: PyRef<'_, PyGrid>,
    gamma: f64,
    p: f64,
    epsilon: f64,
) -> PyResult<Vec<PyEquilibrium>> {
    let (game1, game2, grid) = (&game1.0, &game2.0, &grid.0);
    let sweep = py
        .detach(|| core::bayes_sweep(game1, game2, grid, &[gamma], &[p], epsilon))
        .map_err(value_err)?;
    Ok(sweep.records.iter().map(PyEquilibrium::from).collect())
}

/// `points` may be a count of uniform points or an explicit increasing list.
#[derive(FromPyObject)]
enum Points {
    Count(usize),
    List(Vec<f64>),
}

impl Points {
    fn resolve(self, uniform: fn(usize) -> Vec<f64>) -> Vec<f64> {
        match self {
            Self::Count(n) => uniform(n),
            Self::List(v) => v,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (game, grid, gamma_points = Points::Count(core::sweep::DEFAULT_GAMMA_POINTS), epsilon = core::DEFAULT_EPSILON))]
fn gamma_sweep(
    py: Python<'_>,
    game: PyRef<'_, PyGame>,
    grid: PyRef<'_, PyGrid>,
    gamma_points: Points,
    epsilon: f64,
) -> PyResult<PySweep> {
    let points = gamma_points.resolve(core::sweep::gamma_points);
    let (game, grid) = (&game.0, &grid.0);
    py.detach(|| core::gamma_sweep(game, grid, &points, epsilon))
        .map(PySweep)
        .map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (
    game1,
    game2,
    grid,
    gamma_points = Points::Count(core::sweep::DEFAULT_GAMMA_POINTS),
    p_points = Points::Count(core::sweep::DEFAULT_P_POINTS),
    epsilon = core::DEFAULT_EPSILON
))]
fn bayes_sweep(
    py: Python<'_>,
    game1: PyRef<'_, PyGame>,
    game2: PyRef<'_, PyGame>,
    grid: PyRef<'_, PyGrid>,
    gamma_points: Points,
    p_points: Points,
    epsilon: f64,
) -> PyResult<PySweep> {
    let gammas = gamma_points.resolve(core::sweep::gamma_points);
    let ps = p_points.resolve(core::sweep::p_points);
    let (game1, game2, grid) = (&game1.0, &game2.0, &grid.0);
    py.detach(|| core::bayes_sweep(game1, game2, grid, &gammas, &ps, epsilon))
        .map(PySweep)
        .map_err(value_err)
}

/// Games from a catalogue file, or the shipped catalogue when `path` is omitted.
#[pyfunction]
#[pyo3(signature = (path = None))]
fn load_catalogue(path: Option<PathBuf>) -> PyResult<Vec<PyGame>> {
    let cat = match path {
        Some(p) => GameCatalogue::load(&p).map_err(catalogue_err)?,
        None => GameCatalogue::builtin(),
    };
    Ok(cat.games().cloned().map(PyGame).collect())
}

#[pymodule]
fn qgame(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyStrategyParams>()?;
    m.add_class::<PyGame>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyEquilibrium>()?;
    m.add_class::<PySweep>()?;
    m.add_function(wrap_pyfunction!(entangler, m)?)?;
    m.add_function(wrap_pyfunction!(strategy_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(final_state, m)?)?;
    m.add_function(wrap_pyfunction!(outcome_probs, m)?)?;
    m.add_function(wrap_pyfunction!(expected_payoffs, m)?)?;
    m.add_function(wrap_pyfunction!(nash_two_player, m)?)?;
    m.add_function(wrap_pyfunction!(nash_bayesian, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(bayes_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(load_catalogue, m)?)?;
    Ok(())
}
