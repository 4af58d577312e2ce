//! Speed-limit times and a-priori lower bounds on control times.
//!
//! Every `tmin_*` bound is a function of `(H0, Hc, u_max, ψ0, ψg)` only, so
//! it can be evaluated before any control problem is solved:
//!
//! | bound | origin |
//! |-------|--------|
//! | [`tmin_a`] | geodesic length over the largest Hilbert–Schmidt norm of `H(u)` |
//! | [`tmin_b`] | overlap envelope with the largest admissible energy spread |
//! | [`tmin_c1`] | comparison against the control-only evolution `e^{-iαHc}` |
//! | [`tmin_c2`] | comparison against the free evolution `e^{-iH0 t}` |

use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::dynamics::{ControlHamiltonian, PiecewiseConstantField, Trajectory, TARGET_FIDELITY_TOL};
use crate::quantum::{self, HermitianOperator, PureState, SpectralDecomposition, C64};
use crate::{Error, Result};

pub use crate::dynamics::{sin_star, tqsl_star, QslTime};

/// Eigenvalues closer than this are grouped into one eigenspace.
pub const EIGENSPACE_TOL: f64 = 1e-10;

/// Overlap-sum numerators at or below this are round-off and clamp to zero.
pub const NUMERATOR_FLOOR: f64 = 1e-12;

/// Tolerance for the "ψ is an eigenstate of Hc" precondition.
pub const EIGENSTATE_TOL: f64 = 1e-10;

/// Slack used for bound-vs-time pass flags.
pub const FLAG_TOL: f64 = 1e-9;

/// `arccos(overlap) / ΔE`.
pub fn mandelstam_tamm_time(delta_e: f64, overlap: f64) -> Result<f64> {
    if !(delta_e > 0.0) {
        return Err(Error::NonPositiveEnergy(delta_e));
    }
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::DomainViolation { name: "overlap", value: overlap });
    }
    Ok(overlap.acos() / delta_e)
}

/// `π / (2E)` with `E = ⟨H⟩ − ε0`.
pub fn margolus_levitin_time(mean_energy_above_ground: f64) -> Result<f64> {
    if !(mean_energy_above_ground > 0.0) {
        return Err(Error::NonPositiveEnergy(mean_energy_above_ground));
    }
    Ok(FRAC_PI_2 / mean_energy_above_ground)
}

/// `⟨H⟩ − ε0` for a state, using the spectral ground energy.
pub fn mean_energy_above_ground(state: &PureState, h: &HermitianOperator) -> Result<f64> {
    let mean = quantum::energy_mean(state, h)?;
    let ground = h.spectral()?.eigenvalues()[0];
    Ok(mean - ground)
}

/// `min(π/(2ΔE), π/(2E))`; a non-positive argument drops its term.
pub fn unified_time(delta_e: f64, mean_e: f64) -> Result<f64> {
    let candidates = [delta_e, mean_e].into_iter().filter(|&x| x > 0.0).map(|x| FRAC_PI_2 / x);
    candidates.reduce(f64::min).ok_or(Error::NonPositiveEnergy(delta_e.max(mean_e)))
}

/// Control problem data every bound is computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub ch: ControlHamiltonian,
    pub psi0: PureState,
    pub psig: PureState,
}

impl BoundInputs {
    pub fn new(ch: ControlHamiltonian, psi0: PureState, psig: PureState) -> Result<Self> {
        psi0.ensure_dim(ch.dim())?;
        psig.ensure_dim(ch.dim())?;
        Ok(Self { ch, psi0, psig })
    }

    /// Geodesic length `s(ψ0, ψg)`.
    pub fn geodesic(&self) -> f64 {
        2.0 * self.psi0.angle_to(&self.psig)
    }
}

/// Points of `[-u_max, u_max]` where a convex quadratic in `u` can peak, plus
/// its clamped vertex.
fn candidate_fields(u_max: f64, vertex: Option<f64>) -> impl Iterator<Item = f64> {
    let v = vertex.filter(|v| v.is_finite()).map(|v| v.clamp(-u_max, u_max));
    [Some(-u_max), Some(0.0), Some(u_max), v].into_iter().flatten()
}

/// `max_{|u| ≤ u_max} ‖H0 + u·Hc‖_HS`. Infinite when `u_max = ∞` and `Hc ≠ 0`.
pub fn max_hs_norm(ch: &ControlHamiltonian) -> f64 {
    let (h0, hc) = (ch.drift(), ch.control());
    let c2 = hc.trace_product(hc);
    if ch.u_max().is_infinite() {
        return if c2 > 0.0 { f64::INFINITY } else { h0.hs_norm() };
    }
    let vertex = (c2 > 0.0).then(|| -h0.trace_product(hc) / c2);
    candidate_fields(ch.u_max(), vertex).map(|u| ch.at(u).hs_norm()).fold(0.0, f64::max)
}

/// Coefficients of `ΔE_χ(u)² = a + b·u + c·u²` for a fixed state `χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl VarianceQuadratic {
    pub fn of(chi: &PureState, ch: &ControlHamiltonian) -> Result<Self> {
        chi.ensure_dim(ch.dim())?;
        let h0_chi = ch.drift().apply(chi);
        let hc_chi = ch.control().apply(chi);
        let m0 = quantum::mean_unchecked(chi, &h0_chi);
        let mc = quantum::mean_unchecked(chi, &hc_chi);
        // (H - ⟨H⟩)χ for the drift and control parts separately.
        let d0: alloc::vec::Vec<C64> =
            h0_chi.iter().zip(chi.amplitudes()).map(|(h, x)| h - x * m0).collect();
        let dc: alloc::vec::Vec<C64> =
            hc_chi.iter().zip(chi.amplitudes()).map(|(h, x)| h - x * mc).collect();
        let a = d0.iter().map(|z| z.norm_sqr()).sum();
        let c = dc.iter().map(|z| z.norm_sqr()).sum();
        let b = 2.0 * d0.iter().zip(&dc).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
        Ok(Self { a, b, c })
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.a + self.b * u + self.c * u * u).max(0.0).sqrt()
    }
}

/// `max_{|u| ≤ u_max} ΔE_χ(H0 + u·Hc)`, by evaluating the spread directly at
/// the interval ends and the clamped vertex of its quadratic.
pub fn max_energy_spread(chi: &PureState, ch: &ControlHamiltonian) -> Result<f64> {
    let q = VarianceQuadratic::of(chi, ch)?;
    if ch.u_max().is_infinite() {
        // The cross term vanishes whenever c does (Cauchy–Schwarz), so the
        // spread is then the constant ΔH0.
        return Ok(if q.c > EIGENSTATE_TOL * EIGENSTATE_TOL { f64::INFINITY } else { q.a.sqrt() });
    }
    let vertex = (q.c > 0.0).then(|| -q.b / (2.0 * q.c));
    Ok(candidate_fields(ch.u_max(), vertex)
        .map(|u| quantum::variance_unchecked(chi, &ch.at(u)))
        .fold(0.0, f64::max))
}

fn ratio_or_limit(numerator: f64, denominator: f64) -> f64 {
    if numerator == 0.0 || denominator.is_infinite() {
        0.0
    } else if denominator == 0.0 {
        f64::INFINITY
    } else {
        numerator / denominator
    }
}

/// `s(ψ0, ψg) / (√2 · max ‖H(u)‖)`.
pub fn tmin_a(inputs: &BoundInputs) -> Result<f64> {
    let s = inputs.geodesic();
    Ok(ratio_or_limit(s, core::f64::consts::SQRT_2 * max_hs_norm(&inputs.ch)))
}

/// `s(ψ0, ψg) / (2 · min_χ max_u ΔE_χ(u))`, χ ∈ {ψ0, ψg}.
pub fn tmin_b(inputs: &BoundInputs) -> Result<f64> {
    let s = inputs.geodesic();
    let e0 = max_energy_spread(&inputs.psi0, &inputs.ch)?;
    let eg = max_energy_spread(&inputs.psig, &inputs.ch)?;
    Ok(ratio_or_limit(s, 2.0 * e0.min(eg)))
}

fn control_eigen_residual(chi: &PureState, hc: &HermitianOperator) -> f64 {
    quantum::variance_unchecked(chi, hc)
}

/// `t_min^B` when both ψ0 and ψg are eigenstates of `Hc`:
/// `s / (2 · min(ΔH0|ψ0, ΔH0|ψg))`, independent of `u_max`.
pub fn tmin_b_eigenstate(inputs: &BoundInputs) -> Result<f64> {
    let hc = inputs.ch.control();
    let residual =
        control_eigen_residual(&inputs.psi0, hc).max(control_eigen_residual(&inputs.psig, hc));
    if residual > EIGENSTATE_TOL {
        return Err(Error::NotControlEigenstate { residual });
    }
    let h0 = inputs.ch.drift();
    let spread = quantum::variance_unchecked(&inputs.psi0, h0)
        .min(quantum::variance_unchecked(&inputs.psig, h0));
    Ok(ratio_or_limit(inputs.geodesic(), 2.0 * spread))
}

/// `1 − Σ_k |⟨ψg|P_k|ψ0⟩|` over the eigenprojectors `P_k` of `spec`, clamped
/// at zero. Degenerate eigenvalues share one projector.
pub fn eigenbasis_overlap_deficit(
    spec: &SpectralDecomposition,
    psi0: &PureState,
    psig: &PureState,
) -> f64 {
    let vectors = spec.eigenvectors();
    let sum: f64 = spec
        .degenerate_blocks(EIGENSPACE_TOL)
        .into_iter()
        .map(|block| {
            block
                .map(|j| psig.inner(&vectors[j]) * vectors[j].inner(psi0))
                .sum::<C64>()
                .norm()
        })
        .sum();
    let deficit = 1.0 - sum;
    if deficit <= NUMERATOR_FLOOR {
        0.0
    } else {
        deficit
    }
}

/// `(1 − Σ_j |⟨ψg|φ_j^c⟩⟨φ_j^c|ψ0⟩|) / ‖H0‖`, φ^c the eigenvectors of `Hc`.
pub fn tmin_c1(inputs: &BoundInputs) -> Result<f64> {
    let norm = inputs.ch.drift().hs_norm();
    if norm == 0.0 {
        return Err(Error::ZeroDrift);
    }
    let spec = inputs.ch.control().spectral()?;
    Ok(eigenbasis_overlap_deficit(&spec, &inputs.psi0, &inputs.psig) / norm)
}

/// `(1 − Σ_j |⟨ψg|φ_j^0⟩⟨φ_j^0|ψ0⟩|) / (u_max ‖Hc‖)`, φ^0 the eigenvectors of
/// `H0`. `u_max = ∞` gives 0 and `u_max = 0` gives `∞` (for a nonzero deficit).
pub fn tmin_c2(inputs: &BoundInputs) -> Result<f64> {
    let norm = inputs.ch.control().hs_norm();
    if norm == 0.0 {
        return Err(Error::ZeroControl);
    }
    let spec = inputs.ch.drift().spectral()?;
    let deficit = eigenbasis_overlap_deficit(&spec, &inputs.psi0, &inputs.psig);
    Ok(ratio_or_limit(deficit, inputs.ch.u_max() * norm))
}

/// Both sides of `1 − |⟨ψg|e^{-iα(T)Hc}|ψ0⟩| ≤ ‖H0‖·T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArenzCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub alpha: f64,
    pub target_fidelity: f64,
    pub missed_target: bool,
}

impl ArenzCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + FLAG_TOL
    }

    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Evaluate the control-only comparison inequality for a field that is meant
/// to steer `psi0` into `psig`. Works for an empty field (`T = 0`).
pub fn arenz_overlap_residual(
    psi0: &PureState,
    ch: &ControlHamiltonian,
    field: &PiecewiseConstantField,
    psig: &PureState,
) -> Result<ArenzCheck> {
    psi0.ensure_dim(ch.dim())?;
    psig.ensure_dim(ch.dim())?;
    let alpha = field.integrated_amplitude();
    let evolved = ch.control().unitary_step(alpha)?.apply(psi0)?;
    let lhs = 1.0 - psig.overlap(&evolved);
    let rhs = ch.drift().hs_norm() * field.total_duration();
    Ok(ArenzCheck { lhs, rhs, alpha, target_fidelity: 1.0, missed_target: false })
}

/// [`arenz_overlap_residual`] for a propagated trajectory; flags the result
/// when the trajectory does not actually reach `psig`.
pub fn arenz_overlap_inequality_check(
    traj: &Trajectory,
    ch: &ControlHamiltonian,
    field: &PiecewiseConstantField,
    psig: &PureState,
) -> Result<ArenzCheck> {
    let mut check = arenz_overlap_residual(traj.initial_state(), ch, field, psig)?;
    check.target_fidelity = psig.fidelity(traj.final_state());
    check.missed_target = check.target_fidelity < 1.0 - TARGET_FIDELITY_TOL;
    Ok(check)
}

/// Pass/fail of `t_opt ≥ bound − FLAG_TOL` per bound. `None` when there is no
/// `t_opt` or the bound itself failed to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InequalityFlags {
    pub a: Option<bool>,
    pub b: Option<bool>,
    pub c1: Option<bool>,
    pub c2: Option<bool>,
}

impl InequalityFlags {
    pub fn all_pass(&self) -> bool {
        [self.a, self.b, self.c1, self.c2].iter().all(|f| f.unwrap_or(true))
    }
}

/// All bounds for one problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub t_min_a: Result<f64>,
    pub t_min_b: Result<f64>,
    pub t_min_c1: Result<f64>,
    pub t_min_c2: Result<f64>,
    pub t_qsl_star: Option<Result<QslTime>>,
    pub t_opt: Option<f64>,
    pub flags: InequalityFlags,
}

impl BoundReport {
    pub fn bounds(&self) -> [(&'static str, &Result<f64>); 4] {
        [
            ("tmin_a", &self.t_min_a),
            ("tmin_b", &self.t_min_b),
            ("tmin_c1", &self.t_min_c1),
            ("tmin_c2", &self.t_min_c2),
        ]
    }
}

fn non_negative(r: Result<f64>) -> Result<f64> {
    r.map(|x| x.max(0.0))
}

/// Evaluate every bound; errors stay local to their own field.
pub fn compute_report(
    inputs: &BoundInputs,
    traj: Option<&Trajectory>,
    t_opt: Option<f64>,
) -> BoundReport {
    let t_min_a = non_negative(tmin_a(inputs));
    let t_min_b = non_negative(tmin_b(inputs));
    let t_min_c1 = non_negative(tmin_c1(inputs));
    let t_min_c2 = non_negative(tmin_c2(inputs));
    let t_qsl_star = traj.map(|t| tqsl_star(t, &inputs.psig));
    let flag = |b: &Result<f64>| -> Option<bool> {
        let t = t_opt?;
        b.as_ref().ok().map(|&bound| t >= bound - FLAG_TOL)
    };
    let flags = InequalityFlags {
        a: flag(&t_min_a),
        b: flag(&t_min_b),
        c1: flag(&t_min_c1),
        c2: flag(&t_min_c2),
    };
    BoundReport { t_min_a, t_min_b, t_min_c1, t_min_c2, t_qsl_star, t_opt, flags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{propagate, Segment};
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI, SQRT_2};

    fn lz(delta: f64, u_max: f64) -> ControlHamiltonian {
        ControlHamiltonian::new(
            HermitianOperator::pauli_x().scaled(delta / 2.0),
            HermitianOperator::pauli_z(),
            u_max,
        )
        .unwrap()
    }

    /// Ground states of H(∓γ) from the explicit 2×2 eigenvector formula.
    fn lz_states(delta: f64, theta: f64) -> (PureState, PureState) {
        let gamma = delta / (2.0 * theta.tan());
        let e = (gamma * gamma + delta * delta / 4.0).sqrt();
        let g = |x: f64| PureState::qubit(delta / 2.0, -(x + e)).unwrap();
        (g(-gamma), g(gamma))
    }

    fn inputs(delta: f64, theta: f64, u_max: f64) -> BoundInputs {
        let (a, b) = lz_states(delta, theta);
        BoundInputs::new(lz(delta, u_max), a, b).unwrap()
    }

    #[test]
    fn mandelstam_tamm_examples() {
        assert!((mandelstam_tamm_time(1.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(mandelstam_tamm_time(3.0, 1.0).unwrap(), 0.0);
        assert!((mandelstam_tamm_time(2.0, 0.5f64.sqrt()).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!(mandelstam_tamm_time(0.0, 0.5).is_err());
        assert!(mandelstam_tamm_time(1.0, 1.5).is_err());
    }

    #[test]
    fn margolus_levitin_examples() {
        assert!((margolus_levitin_time(1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((margolus_levitin_time(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!(margolus_levitin_time(0.0).is_err());
        let plus = PureState::qubit(1.0, 1.0).unwrap();
        let e = mean_energy_above_ground(&plus, &HermitianOperator::pauli_z()).unwrap();
        assert!((margolus_levitin_time(e).unwrap() - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn unified_examples() {
        assert!((unified_time(1.0, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((unified_time(2.0, 1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!(unified_time(0.0, -1.0).is_err());
    }

    #[test]
    fn unified_bound_attained_by_equal_superposition() {
        // e^{-iσz t}|+⟩ first becomes orthogonal to |+⟩ at t = π/2.
        let plus = PureState::qubit(1.0, 1.0).unwrap();
        let z = HermitianOperator::pauli_z();
        let de = quantum::energy_variance(&plus, &z).unwrap();
        let e = mean_energy_above_ground(&plus, &z).unwrap();
        let bound = unified_time(de, e).unwrap();
        let first_zero = (1..=100_000)
            .map(|k| k as f64 * 1e-5 * 2.0)
            .find(|&t| plus.overlap(&z.unitary_step(t).unwrap().apply(&plus).unwrap()) < 1e-5)
            .unwrap();
        assert!((bound - FRAC_PI_2).abs() < 1e-14);
        assert!((first_zero - bound).abs() < 2e-5);
    }

    #[test]
    fn tmin_a_examples() {
        // u_max = 0, θ→0 limit: (π/2)/(Δ/2) = π.
        let t = tmin_a(&inputs(1.0, 1e-9, 0.0)).unwrap();
        assert!((t - PI).abs() < 1e-8);
        let same = BoundInputs::new(lz(1.0, 1.0), lz_states(1.0, 0.3).0, lz_states(1.0, 0.3).0).unwrap();
        assert_eq!(tmin_a(&same).unwrap(), 0.0);
        assert_eq!(tmin_a(&inputs(1.0, 0.3, f64::INFINITY)).unwrap(), 0.0);
    }

    #[test]
    fn tmin_a_zero_hamiltonian_is_infinite() {
        let z = HermitianOperator::zero(2).unwrap();
        let ch = ControlHamiltonian::new(z.clone(), z, 1.0).unwrap();
        let i = BoundInputs::new(ch, PureState::basis(2, 0).unwrap(), PureState::basis(2, 1).unwrap())
            .unwrap();
        assert_eq!(tmin_a(&i).unwrap(), f64::INFINITY);
    }

    #[test]
    fn tmin_b_examples() {
        let t = tmin_b(&inputs(1.0, 1e-9, 0.0)).unwrap();
        assert!((t - PI).abs() < 1e-8);
        let same = BoundInputs::new(lz(1.0, 1.0), lz_states(1.0, 0.3).0, lz_states(1.0, 0.3).0).unwrap();
        assert_eq!(tmin_b(&same).unwrap(), 0.0);
        // θ = π/4, u_max = 1: (π/4)/((1/2)(√2/2) + √2/2).
        let closed = FRAC_PI_4 / (0.5 * FRAC_PI_4.cos() + FRAC_PI_4.sin());
        let t = tmin_b(&inputs(1.0, FRAC_PI_4, 1.0)).unwrap();
        assert!((t - closed).abs() < 1e-12);
        assert!((closed - 0.7405).abs() < 1e-4);
        assert_eq!(tmin_b(&inputs(1.0, FRAC_PI_4, f64::INFINITY)).unwrap(), 0.0);
    }

    #[test]
    fn tmin_b_uncontrollable_is_infinite() {
        // ψ0 eigenstate of every H(u), target elsewhere.
        let ch = ControlHamiltonian::new(HermitianOperator::pauli_z(), HermitianOperator::pauli_z(), 1.0)
            .unwrap();
        let i = BoundInputs::new(ch, PureState::basis(2, 0).unwrap(), PureState::qubit(1.0, 1.0).unwrap())
            .unwrap();
        assert_eq!(tmin_b(&i).unwrap(), f64::INFINITY);
    }

    #[test]
    fn tmin_b_eigenstate_examples() {
        let mk = |u_max: f64| {
            BoundInputs::new(
                lz(1.0, u_max),
                PureState::basis(2, 0).unwrap(),
                PureState::basis(2, 1).unwrap(),
            )
            .unwrap()
        };
        assert!((tmin_b_eigenstate(&mk(1.0)).unwrap() - PI).abs() < 1e-14);
        assert_eq!(tmin_b_eigenstate(&mk(10.0)).unwrap(), tmin_b_eigenstate(&mk(1e6)).unwrap());
        assert!((tmin_b(&mk(10.0)).unwrap() - tmin_b_eigenstate(&mk(10.0)).unwrap()).abs() < 1e-14);
        assert!(matches!(
            tmin_b_eigenstate(&inputs(1.0, 0.4, 1.0)),
            Err(Error::NotControlEigenstate { .. })
        ));
    }

    #[test]
    fn tmin_c1_examples() {
        let t = tmin_c1(&inputs(1.0, 1e-12, 1.0)).unwrap();
        assert!((t - SQRT_2).abs() < 1e-10);
        let k0 = PureState::basis(2, 0).unwrap();
        let same = BoundInputs::new(lz(1.0, 1.0), k0.clone(), k0).unwrap();
        assert_eq!(tmin_c1(&same).unwrap(), 0.0);
        let closed = (1.0 - FRAC_PI_6.sin()) / (SQRT_2 / 2.0);
        assert!((tmin_c1(&inputs(1.0, FRAC_PI_6, 1.0)).unwrap() - closed).abs() < 1e-12);
        assert!((closed - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn tmin_c1_requires_drift() {
        let ch = ControlHamiltonian::new(
            HermitianOperator::zero(2).unwrap(),
            HermitianOperator::pauli_z(),
            1.0,
        )
        .unwrap();
        let i = BoundInputs::new(ch, PureState::basis(2, 0).unwrap(), PureState::basis(2, 1).unwrap())
            .unwrap();
        assert_eq!(tmin_c1(&i), Err(Error::ZeroDrift));
    }

    #[test]
    fn tmin_c2_examples() {
        for &theta in &[0.05, 0.4, 1.1, 1.5] {
            assert_eq!(tmin_c2(&inputs(1.0, theta, 0.7)).unwrap(), 0.0);
        }
        // Swapped roles: drift σz, control σx. Oracle: φ_j^0 = |0⟩, |1⟩ explicitly.
        let u_max = 0.8;
        for &theta in &[0.2, FRAC_PI_6, 1.0] {
            let (a, b) = lz_states(1.0, theta);
            let oracle_sum: f64 = (0..2)
                .map(|j| (b.amplitudes()[j].conj() * a.amplitudes()[j]).norm())
                .sum();
            let oracle = (1.0 - oracle_sum) / (u_max * SQRT_2);
            let ch = ControlHamiltonian::new(HermitianOperator::pauli_z(), HermitianOperator::pauli_x(), u_max)
                .unwrap();
            let t = tmin_c2(&BoundInputs::new(ch, a, b).unwrap()).unwrap();
            assert!((t - oracle).abs() < 1e-12);
            assert!((t - (1.0 - theta.sin()) / (u_max * SQRT_2)).abs() < 1e-12);
        }
    }

    #[test]
    fn tmin_c2_field_bound_limits() {
        let ch = |u: f64| {
            ControlHamiltonian::new(HermitianOperator::pauli_z(), HermitianOperator::pauli_x(), u).unwrap()
        };
        let (a, b) = lz_states(1.0, 0.3);
        let at = |u: f64| tmin_c2(&BoundInputs::new(ch(u), a.clone(), b.clone()).unwrap()).unwrap();
        assert_eq!(at(0.0), f64::INFINITY);
        assert_eq!(at(f64::INFINITY), 0.0);
    }

    #[test]
    fn arenz_check_examples() {
        // Free geodesic under Δ/2 σx with u ≡ 0: lhs is 1 - |⟨1|0⟩| = 1.
        let ch = lz(1.0, 0.0);
        let field = PiecewiseConstantField::new(alloc::vec![Segment::new(PI, 0.0)]).unwrap();
        let k0 = PureState::basis(2, 0).unwrap();
        let traj = propagate(&ch, &field, &k0, 50).unwrap();
        let c = arenz_overlap_inequality_check(&traj, &ch, &field, traj.final_state()).unwrap();
        assert!(c.holds());
        assert!(c.rhs - c.lhs > 1.0);
        // T = 0, ψg = ψ0.
        let c = arenz_overlap_residual(&k0, &ch, &PiecewiseConstantField::empty(), &k0).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    }

    #[test]
    fn report_for_identical_states() {
        let (a, _) = lz_states(1.0, 0.7);
        let i = BoundInputs::new(lz(1.0, 2.0), a.clone(), a).unwrap();
        let r = compute_report(&i, None, Some(0.0));
        for (_, b) in r.bounds() {
            assert_eq!(*b, Ok(0.0));
        }
        assert!(r.flags.all_pass());
        assert!(r.t_qsl_star.is_none());
    }

    #[test]
    fn report_keeps_going_after_a_failed_bound() {
        let ch = ControlHamiltonian::new(
            HermitianOperator::zero(2).unwrap(),
            HermitianOperator::pauli_z(),
            1.0,
        )
        .unwrap();
        let i = BoundInputs::new(ch, PureState::basis(2, 0).unwrap(), PureState::qubit(1.0, 1.0).unwrap())
            .unwrap();
        let r = compute_report(&i, None, Some(1.0));
        assert_eq!(r.t_min_c1, Err(Error::ZeroDrift));
        assert!(r.t_min_c2.is_ok());
        assert_eq!(r.flags.c1, None);
    }

    #[test]
    fn degenerate_control_groups_projectors() {
        // Hc = diag(1, 1, -1): the first two basis vectors share an eigenspace.
        let hc = HermitianOperator::from_real_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]])
            .unwrap();
        let h0 = HermitianOperator::from_real_rows([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
            .unwrap();
        let ch = ControlHamiltonian::new(h0, hc, 1.0).unwrap();
        let v = |x: f64, y: f64| {
            PureState::normalized(alloc::vec![C64::new(x, 0.0), C64::new(y, 0.0), C64::new(0.0, 0.0)])
                .unwrap()
        };
        // e^{-iαHc} is a pure phase on span{|0⟩,|1⟩}, so ⟨b|e^{-iαHc}|a⟩ = 0 for
        // every α and the deficit is 1. A per-vector sum would give 0.
        let norm = ch.drift().hs_norm();
        let i = BoundInputs::new(ch, v(1.0, 1.0), v(1.0, -1.0)).unwrap();
        assert!((tmin_c1(&i).unwrap() - 1.0 / norm).abs() < 1e-12);
    }
}
