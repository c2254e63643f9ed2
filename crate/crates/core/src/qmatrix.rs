//! Fixed-shape complex linear algebra for one and two qubits.
//!
//! The two-qubit basis is ordered `|00⟩, |01⟩, |10⟩, |11⟩` everywhere in the
//! crate; the first tensor factor is player A's qubit.

use std::ops::Mul;

pub use num_complex::Complex64 as Complex;

/// Tolerance for exact algebraic identities (unitarity, Kronecker identities).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for results accumulated through a full circuit evaluation.
pub const CIRCUIT_TOL: f64 = 1e-10;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// A dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2(pub [[Complex; 2]; 2]);

/// A dense 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[Complex; 4]; 4]);

/// Amplitudes of a two-qubit pure state in `|00⟩, |01⟩, |10⟩, |11⟩` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector4(pub [Complex; 4]);

impl ComplexMatrix2 {
    pub const IDENTITY: Self = Self([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(entries: [[Complex; 2]; 2]) -> Self {
        Self(entries)
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, factor: Complex) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= factor);
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.dagger() * *self).approx_eq(&Self::IDENTITY, tol)
    }

    /// Column `j` as a pair of amplitudes.
    #[inline]
    pub fn column(&self, j: usize) -> [Complex; 2] {
        [self.0[0][j], self.0[1][j]]
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Self(out)
    }
}

impl ComplexMatrix4 {
    pub const IDENTITY: Self = Self([
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, ONE, ZERO, ZERO],
        [ZERO, ZERO, ONE, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ]);

    pub fn new(entries: [[Complex; 4]; 4]) -> Self {
        Self(entries)
    }

    pub fn dagger(&self) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                out[j][i] = z.conj();
            }
        }
        Self(out)
    }

    pub fn apply(&self, v: &StateVector4) -> StateVector4 {
        let mut out = [ZERO; 4];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            *o = row.iter().zip(v.0.iter()).map(|(m, x)| m * x).sum();
        }
        StateVector4(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.dagger() * *self).approx_eq(&Self::IDENTITY, tol)
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Self(out)
    }
}

impl Mul<StateVector4> for ComplexMatrix4 {
    type Output = StateVector4;

    fn mul(self, rhs: StateVector4) -> StateVector4 {
        self.apply(&rhs)
    }
}

/// Kronecker product `a ⊗ b`: entry `[(2i+k), (2j+l)] = a[i][j] · b[k][l]`.
pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    ComplexMatrix4(out)
}

impl StateVector4 {
    /// The `|00⟩` basis state.
    pub const GROUND: Self = Self([ONE, ZERO, ZERO, ZERO]);

    pub fn new(amplitudes: [Complex; 4]) -> Self {
        Self(amplitudes)
    }

    pub fn basis(k: usize) -> Self {
        let mut amps = [ZERO; 4];
        amps[k] = ONE;
        Self(amps)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Squared moduli of the amplitudes, in basis order.
    pub fn probabilities(&self) -> [f64; 4] {
        self.0.map(|z| z.norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}
