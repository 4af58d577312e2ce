use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use super::C64;
use crate::{Error, Result};

/// Normalization tolerance enforced by [`PureState::new`].
pub const NORM_TOL: f64 = 1e-12;

/// Perpendicular components below this are round-off; the angle snaps to 0.
const ANGLE_FLOOR: f64 = 1e-15;

/// Normalized state vector in a `d`-dimensional Hilbert space, `d >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    /// Wrap amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        check_amplitudes(&amps)?;
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Normalize arbitrary non-zero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        check_amplitudes(&amps)?;
        let norm = norm_of(&amps);
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { amps })
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if k >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: k + 1 });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Qubit state from two real amplitudes, normalized.
    pub fn qubit(a: f64, b: f64) -> Result<Self> {
        Self::normalized(vec![C64::new(a, 0.0), C64::new(b, 0.0)])
    }

    /// Skips the normalization check. Used for propagated states, whose norm
    /// drift is a tested property rather than an input condition.
    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, clamped to `[0, 1]`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm().min(1.0)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let o = self.overlap(other);
        o * o
    }

    /// Angle `arccos |⟨self|other⟩|` in `[0, π/2]`.
    ///
    /// Evaluated as `atan2(‖other − ⟨self|other⟩ self‖, |⟨self|other⟩|)`, which
    /// stays accurate near both endpoints where `arccos` loses half the digits.
    pub fn angle_to(&self, other: &Self) -> f64 {
        let c = self.inner(other);
        let perp: f64 = other
            .amps
            .iter()
            .zip(&self.amps)
            .map(|(b, a)| (b - c * a).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if perp <= ANGLE_FLOOR {
            return 0.0;
        }
        perp.atan2(c.norm())
    }

    pub(crate) fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }
}

fn check_amplitudes(amps: &[C64]) -> Result<()> {
    if amps.len() < 2 {
        return Err(Error::DimensionTooSmall(amps.len()));
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn norm_of(amps: &[C64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn rejects_unnormalized_and_tiny() {
        assert!(matches!(
            PureState::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            PureState::new(vec![C64::new(1.0, 0.0)]),
            Err(Error::DimensionTooSmall(1))
        ));
        assert!(PureState::normalized(vec![C64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn angle_matches_arccos_away_from_endpoints() {
        let a = PureState::basis(2, 0).unwrap();
        let b = PureState::qubit(1.0, 1.0).unwrap();
        assert!((a.angle_to(&b) - FRAC_PI_4).abs() < 1e-15);
        let c = PureState::qubit(0.3, 0.7).unwrap();
        assert!((a.angle_to(&c) - a.overlap(&c).acos()).abs() < 1e-14);
    }

    #[test]
    fn angle_is_phase_invariant() {
        let a = PureState::qubit(0.6, 0.8).unwrap();
        let phased =
            PureState::new(a.amplitudes().iter().map(|z| z * C64::from_polar(1.0, 0.7)).collect())
                .unwrap();
        assert!(a.angle_to(&phased) < 1e-15);
    }
}
