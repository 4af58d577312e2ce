//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real symmetric Schur rotation. At the
//! sizes handled here (d ≤ ~16) this converges in a handful of sweeps and is
//! accurate to a few ulps of `‖A‖_F`.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use super::{HermitianOperator, Matrix, PureState, C64};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;
const OFF_DIAGONAL_TOL: f64 = 1e-15;

/// Entries within this distance of the largest magnitude count as tied when
/// fixing the eigenvector phase.
pub const PHASE_TIE_TOL: f64 = 1e-10;

/// Eigen-decomposition `H = Σ_j λ_j |v_j⟩⟨v_j|` with ascending eigenvalues.
///
/// Each eigenvector is scaled so its largest-magnitude entry is real and
/// positive (lowest index wins a tie).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<PureState>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[PureState] {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &PureState)> {
        self.eigenvalues.iter().copied().zip(&self.eigenvectors)
    }

    /// `Σ_j λ_j |v_j⟩⟨v_j|`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, |i, k| {
            self.iter()
                .map(|(lambda, v)| {
                    let a = v.amplitudes();
                    a[i] * a[k].conj() * lambda
                })
                .sum()
        })
    }

    /// Eigenvector matrix with the eigenvectors as columns.
    pub fn eigenvector_matrix(&self) -> Matrix {
        Matrix::from_fn(self.dim(), |i, j| self.eigenvectors[j].amplitudes()[i])
    }

    /// Groups of eigenvector indices whose eigenvalues agree within `tol`.
    pub fn degenerate_blocks(&self, tol: f64) -> Vec<core::ops::Range<usize>> {
        let mut blocks = Vec::new();
        let mut start = 0;
        for j in 1..=self.dim() {
            if j == self.dim() || self.eigenvalues[j] - self.eigenvalues[j - 1] > tol {
                blocks.push(start..j);
                start = j;
            }
        }
        blocks
    }
}

pub(crate) fn decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let (values, vectors) = jacobi(h.matrix())?;
    let n = values.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let eigenvalues = order.iter().map(|&j| values[j]).collect();
    let eigenvectors = order
        .iter()
        .map(|&j| {
            let column: Vec<C64> = (0..n).map(|i| vectors[(i, j)]).collect();
            PureState::from_raw(fix_phase(column))
        })
        .collect();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

fn fix_phase(mut v: Vec<C64>) -> Vec<C64> {
    let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= largest - PHASE_TIE_TOL)
        .expect("some entry attains the maximum");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in &mut v {
        *z *= phase;
    }
    v[pivot] = C64::new(v[pivot].re, 0.0);
    v
}

fn jacobi(m: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    if scale == 0.0 {
        return Ok((alloc::vec![0.0; n], v));
    }

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= OFF_DIAGONAL_TOL * scale {
            let values = (0..n).map(|i| a[(i, i)].re).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    if off_diagonal(&a) <= OFF_DIAGONAL_TOL * scale {
        let values = (0..n).map(|i| a[(i, i)].re).collect();
        return Ok((values, v));
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn off_diagonal(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }

    // Diagonal unitary D = diag(1, .., d_q, ..) making (D† A D)_pq = r real.
    let d = apq.conj() / r;
    for k in 0..n {
        a[(k, q)] *= d;
        v[(k, q)] *= d;
    }
    for k in 0..n {
        a[(q, k)] *= d.conj();
    }

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;

        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }

    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}
