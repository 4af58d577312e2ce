use alloc::vec::Vec;

use super::spectral::{self, SpectralDecomposition};
use super::{Matrix, PureState, C64};
use crate::{Error, Result};

/// Hermiticity tolerance, relative to `max(1, max |h_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Gap below which the lowest eigenvalue is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Hermitian `d × d` operator (energy units, ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: Matrix,
}

impl HermitianOperator {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.dim() < 2 {
            return Err(Error::DimensionTooSmall(m.dim()));
        }
        let scale = m.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = m.hermiticity_defect();
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { m: symmetrize(&m) })
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(Matrix::from_fn(N, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(Matrix::zeros(dim))
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).expect("valid")
    }

    pub fn pauli_y() -> Self {
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        Self::new(Matrix::from_row_major(alloc::vec![z, -i, i, z]).expect("2x2")).expect("valid")
    }

    pub fn pauli_z() -> Self {
        Self::from_real_rows([[1.0, 0.0], [0.0, -1.0]]).expect("valid")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { m: self.m.scale(factor) }
    }

    /// `self + u · other`.
    pub fn plus_scaled(&self, u: f64, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(Self { m: &self.m + &other.m.scale(u) })
    }

    pub fn apply(&self, state: &PureState) -> Vec<C64> {
        self.m.apply(state.amplitudes())
    }

    /// Real trace inner product `tr(self · other)`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.m[(i, j)] * other.m[(j, i)]).re;
            }
        }
        acc
    }

    /// Hilbert–Schmidt norm `sqrt(tr H²)`.
    pub fn hs_norm(&self) -> f64 {
        self.m.frobenius_norm()
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral::decompose(self)
    }

    /// Eigenvector of the smallest eigenvalue.
    pub fn ground_state(&self) -> Result<PureState> {
        let spec = self.spectral()?;
        let gap = spec.eigenvalues()[1] - spec.eigenvalues()[0];
        if gap <= DEGENERACY_TOL {
            return Err(Error::DegenerateGround { gap });
        }
        Ok(spec.eigenvectors()[0].clone())
    }

    /// `exp(-i H dt)`.
    pub fn unitary_step(&self, dt: f64) -> Result<Unitary> {
        if !dt.is_finite() {
            return Err(Error::NonFinite);
        }
        if dt == 0.0 {
            return Ok(Unitary(Matrix::identity(self.dim())));
        }
        let spec = self.spectral()?;
        Ok(Unitary::from_spectrum(&spec, dt))
    }

    pub(crate) fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }
}

fn symmetrize(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.dim(), |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    })
}

/// Unitary matrix produced by exact exponentiation.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(Matrix);

impl Unitary {
    pub(crate) fn from_spectrum(spec: &SpectralDecomposition, dt: f64) -> Self {
        let n = spec.dim();
        let v = spec.eigenvector_matrix();
        let phases: Vec<C64> = spec.eigenvalues().iter().map(|&l| C64::from_polar(1.0, -l * dt)).collect();
        Self(Matrix::from_fn(n, |i, k| {
            (0..n).map(|j| v[(i, j)] * phases[j] * v[(k, j)].conj()).sum()
        }))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        state.ensure_dim(self.dim())?;
        Ok(PureState::from_raw(self.0.apply(state.amplitudes())))
    }

    pub fn then(&self, next: &Unitary) -> Unitary {
        Unitary(&next.0 * &self.0)
    }
}
