//! Pure states, Hermitian operators and the geometric quantities built on them.

mod matrix;
mod operator;
mod spectral;
mod state;

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

pub use matrix::Matrix;
pub use operator::{HermitianOperator, Unitary, DEGENERACY_TOL, HERMITIAN_TOL};
pub use spectral::{SpectralDecomposition, PHASE_TIE_TOL};
pub use state::{PureState, NORM_TOL};

use crate::Result;

pub type C64 = num_complex::Complex64;

/// Fubini–Study distance `s(a, b) = 2 arccos |⟨a|b⟩|`, in `[0, π]`.
pub fn fubini_study_distance(a: &PureState, b: &PureState) -> Result<f64> {
    b.ensure_dim(a.dim())?;
    Ok(2.0 * a.angle_to(b))
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy_mean(state: &PureState, h: &HermitianOperator) -> Result<f64> {
    h.ensure_dim(state.dim())?;
    Ok(mean_unchecked(state, &h.apply(state)))
}

/// Standard deviation `ΔE = sqrt(⟨H²⟩ − ⟨H⟩²)`.
///
/// Computed as `‖(H − ⟨H⟩)ψ‖`, which equals the textbook expression and is
/// non-negative by construction.
pub fn energy_variance(state: &PureState, h: &HermitianOperator) -> Result<f64> {
    h.ensure_dim(state.dim())?;
    Ok(variance_unchecked(state, h))
}

pub(crate) fn mean_unchecked(state: &PureState, h_psi: &[C64]) -> f64 {
    state.amplitudes().iter().zip(h_psi).map(|(a, b)| (a.conj() * b).re).sum()
}

pub(crate) fn variance_unchecked(state: &PureState, h: &HermitianOperator) -> f64 {
    let h_psi = h.apply(state);
    let mean = mean_unchecked(state, &h_psi);
    h_psi
        .iter()
        .zip(state.amplitudes())
        .map(|(hp, p)| (hp - p * mean).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Hilbert–Schmidt norm `sqrt(tr H²)`.
pub fn hs_norm(h: &HermitianOperator) -> f64 {
    h.hs_norm()
}

pub fn spectral(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    h.spectral()
}

pub fn ground_state(h: &HermitianOperator) -> Result<PureState> {
    h.ground_state()
}

/// `exp(-i h dt)` via the spectral decomposition of `h`.
pub fn unitary_step(h: &HermitianOperator, dt: f64) -> Result<Unitary> {
    h.unitary_step(dt)
}

/// Split the Schrödinger velocity `-iHψ` into the phase part `-i⟨E⟩ψ` and
/// the remainder. Returns `(‖velocity‖, ‖perpendicular part‖)`; the second is
/// the Hilbert-space speed and equals `ΔE`.
pub fn velocity_split(state: &PureState, h: &HermitianOperator) -> Result<(f64, f64)> {
    h.ensure_dim(state.dim())?;
    let i = C64::new(0.0, 1.0);
    let velocity: Vec<C64> = h.apply(state).into_iter().map(|z| -i * z).collect();
    let mean = mean_unchecked(state, &h.apply(state));
    let total = velocity.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let perp = velocity
        .iter()
        .zip(state.amplitudes())
        .map(|(v, p)| (v + i * mean * p).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((total, perp))
}
