//! The EWL circuit: entangle, apply local strategies, disentangle, measure.
//!
//! Outcome `|0⟩` is the cooperative move C and `|1⟩` the defecting move D.
//! With the entangler `J(γ) = exp(iγ/2 · σx⊗σx)` the classical moves embed as
//! `U(0,0,0) = I` and `U(π,0,π/2) = iσx`; their tensor products commute with
//! `J`, so classical profiles pay the classical cells at every `γ`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::qmatrix::{kron, Complex, ComplexMatrix2, ComplexMatrix4, StateVector4};

/// Parameters `(θ, φ, α)` of a single-qubit strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyParams {
    theta: f64,
    phi: f64,
    alpha: f64,
}

impl StrategyParams {
    /// The identity strategy, classical C.
    pub const IDENTITY: Self = Self {
        theta: 0.0,
        phi: 0.0,
        alpha: 0.0,
    };

    /// `U(π, 0, π/2) = iσx`, the classical D under this entangler.
    pub const CLASSICAL_DEFECT: Self = Self {
        theta: PI,
        phi: 0.0,
        alpha: FRAC_PI_2,
    };

    pub const THETA_MAX: f64 = PI;
    pub const PHI_MAX: f64 = 2.0 * PI;
    pub const ALPHA_MAX: f64 = 2.0 * PI;

    pub fn new(theta: f64, phi: f64, alpha: f64) -> Result<Self> {
        check_range("theta", theta, Self::THETA_MAX)?;
        check_range("phi", phi, Self::PHI_MAX)?;
        check_range("alpha", alpha, Self::ALPHA_MAX)?;
        Ok(Self { theta, phi, alpha })
    }

    /// Like [`StrategyParams::new`], but values within `slack` outside an
    /// interval are pulled onto its boundary. Used when reading rounded values
    /// back from text output.
    pub fn new_clamped(theta: f64, phi: f64, alpha: f64, slack: f64) -> Result<Self> {
        Self::new(
            clamp_near("theta", theta, Self::THETA_MAX, slack)?,
            clamp_near("phi", phi, Self::PHI_MAX, slack)?,
            clamp_near("alpha", alpha, Self::ALPHA_MAX, slack)?,
        )
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn as_tuple(&self) -> (f64, f64, f64) {
        (self.theta, self.phi, self.alpha)
    }
}

fn check_range(name: &'static str, value: f64, hi: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    if !(0.0..=hi).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi,
        });
    }
    Ok(())
}

fn clamp_near(name: &'static str, value: f64, hi: f64, slack: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    if value < 0.0 && value >= -slack {
        Ok(0.0)
    } else if value > hi && value <= hi + slack {
        Ok(hi)
    } else {
        Ok(value)
    }
}

/// Entanglement parameter `γ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntanglementParam(f64);

impl EntanglementParam {
    pub const MAX: f64 = FRAC_PI_2;
    pub const ZERO: Self = Self(0.0);
    pub const MAXIMAL: Self = Self(FRAC_PI_2);

    pub fn new(gamma: f64) -> Result<Self> {
        check_range("gamma", gamma, Self::MAX)?;
        Ok(Self(gamma))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// A two-player game: payoffs to A and B indexed by outcome `00, 01, 10, 11`.
#[derive(Debug, Clone, PartialEq)]
pub struct GameDefinition {
    pub name: String,
    pub payoff_a: [f64; 4],
    pub payoff_b: [f64; 4],
}

impl GameDefinition {
    pub fn new(name: impl Into<String>, payoff_a: [f64; 4], payoff_b: [f64; 4]) -> Result<Self> {
        let name = name.into();
        if let Some(bad) = payoff_a.iter().chain(&payoff_b).find(|x| !x.is_finite()) {
            return Err(Error::InvalidGame {
                game: name,
                reason: format!("non-finite payoff {bad}"),
            });
        }
        Ok(Self {
            name,
            payoff_a,
            payoff_b,
        })
    }

    /// The prisoner's dilemma: `(C,C)=(3,3)`, `(C,D)=(0,5)`, `(D,C)=(5,0)`, `(D,D)=(1,1)`.
    pub fn prisoners_dilemma() -> Self {
        Self {
            name: "prisoners_dilemma".into(),
            payoff_a: [3.0, 0.0, 5.0, 1.0],
            payoff_b: [3.0, 5.0, 0.0, 1.0],
        }
    }

    /// Both players' payoffs multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            name: self.name.clone(),
            payoff_a: self.payoff_a.map(|x| x * factor),
            payoff_b: self.payoff_b.map(|x| x * factor),
        }
    }

    /// The constant sum if `payoff_a[j] + payoff_b[j]` is the same for all outcomes.
    pub fn constant_sum(&self) -> Option<f64> {
        let sums: Vec<f64> = (0..4).map(|j| self.payoff_a[j] + self.payoff_b[j]).collect();
        sums.iter().all(|s| (s - sums[0]).abs() <= 1e-12).then_some(sums[0])
    }

    /// True if B's payoffs are A's with the roles exchanged (01 ↔ 10).
    pub fn is_symmetric(&self) -> bool {
        const SWAP: [usize; 4] = [0, 2, 1, 3];
        (0..4).all(|j| self.payoff_b[j] == self.payoff_a[SWAP[j]])
    }
}

/// The entangling gate: `cos(γ/2)` on the diagonal, `i·sin(γ/2)` on the
/// anti-diagonal.
pub fn entangler(gamma: EntanglementParam) -> ComplexMatrix4 {
    let (s, c) = (gamma.value() / 2.0).sin_cos();
    let d = Complex::new(c, 0.0);
    let a = Complex::new(0.0, s);
    let z = Complex::new(0.0, 0.0);
    ComplexMatrix4([[d, z, z, a], [z, d, a, z], [z, a, d, z], [a, z, z, d]])
}

/// `U(θ,φ,α) = [[e^{-iφ}cos(θ/2), e^{iα}sin(θ/2)], [-e^{-iα}sin(θ/2), e^{iφ}cos(θ/2)]]`.
pub fn strategy_matrix(p: &StrategyParams) -> ComplexMatrix2 {
    let (s, c) = (p.theta / 2.0).sin_cos();
    ComplexMatrix2([
        [Complex::from_polar(c, -p.phi), Complex::from_polar(s, p.alpha)],
        [-Complex::from_polar(s, -p.alpha), Complex::from_polar(c, p.phi)],
    ])
}

/// `J†(U_A ⊗ U_B)J|00⟩` by explicit 4×4 products.
pub fn final_state(gamma: EntanglementParam, a: &StrategyParams, b: &StrategyParams) -> StateVector4 {
    Circuit::new(gamma).naive_final_state(&strategy_matrix(a), &strategy_matrix(b))
}

pub fn outcome_probs(v: &StateVector4) -> [f64; 4] {
    v.probabilities()
}

/// `(⟨$^A⟩, ⟨$^B⟩)` for an outcome distribution.
pub fn expected_payoffs(probs: &[f64; 4], game: &GameDefinition) -> (f64, f64) {
    debug_assert!(probs.iter().all(|&p| p >= -1e-12));
    let dot = |w: &[f64; 4]| probs.iter().zip(w).map(|(p, x)| p * x).sum::<f64>();
    (dot(&game.payoff_a), dot(&game.payoff_b))
}

/// The circuit at a fixed `γ`, reusable across many strategy pairs.
#[derive(Debug, Clone, Copy)]
pub struct Circuit {
    gamma: EntanglementParam,
    cos: f64,
    sin: f64,
}

impl Circuit {
    pub fn new(gamma: EntanglementParam) -> Self {
        let (sin, cos) = (gamma.value() / 2.0).sin_cos();
        Self { gamma, cos, sin }
    }

    pub fn gamma(&self) -> EntanglementParam {
        self.gamma
    }

    /// Reference evaluation through full matrix products.
    pub fn naive_final_state(&self, ua: &ComplexMatrix2, ub: &ComplexMatrix2) -> StateVector4 {
        let j = entangler(self.gamma);
        (j.dagger() * kron(ua, ub) * j).apply(&StateVector4::GROUND)
    }

    /// Same result as [`Circuit::naive_final_state`], using that `J|00⟩` has
    /// support on `|00⟩, |11⟩` only and `J† = cos·I − i·sin·(σx⊗σx)`.
    #[inline]
    pub fn final_state(&self, ua: &ComplexMatrix2, ub: &ComplexMatrix2) -> StateVector4 {
        let (a0, a1) = (ua.column(0), ua.column(1));
        let (b0, b1) = (ub.column(0), ub.column(1));
        let is = Complex::new(0.0, self.sin);
        let mut w = [Complex::new(0.0, 0.0); 4];
        for i in 0..2 {
            for k in 0..2 {
                w[2 * i + k] = a0[i] * b0[k] * self.cos + a1[i] * b1[k] * is;
            }
        }
        StateVector4(std::array::from_fn(|k| w[k] * self.cos - w[3 - k] * is))
    }

    pub fn probabilities(&self, ua: &ComplexMatrix2, ub: &ComplexMatrix2) -> [f64; 4] {
        self.final_state(ua, ub).probabilities()
    }

    pub fn payoffs(&self, ua: &ComplexMatrix2, ub: &ComplexMatrix2, game: &GameDefinition) -> (f64, f64) {
        expected_payoffs(&self.probabilities(ua, ub), game)
    }
}
