//! Exact propagation under piecewise-constant control fields.
//!
//! Within a segment the Hamiltonian `H0 + u·Hc` is constant, so the state at
//! any time inside it is `V e^{-iΛt} V† ψ_start` with one eigendecomposition
//! per segment. Sampling density only affects the integrals built on top of
//! the trajectory, never the states themselves.
//!
//! Trajectories carry a sample at both ends of every segment, so a segment
//! boundary appears twice with the same state and time: once with the old
//! amplitude and once with the new one. Composite trapezoid sums over the
//! sample list are then exactly the sum of per-segment trapezoids, and
//! piecewise-constant integrands (like `ΔE` under a constant Hamiltonian)
//! integrate without error.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::quantum::{self, HermitianOperator, PureState, C64};
use crate::{Error, Result};

pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 200;

/// Successive path-length estimates closer than this stop the refinement.
pub const PATH_LENGTH_REFINE_TOL: f64 = 1e-8;

const MAX_DOUBLINGS: u32 = 8;

/// Relative slack on `|u| ≤ u_max`.
const FIELD_BOUND_SLACK: f64 = 1e-12;

/// `H(u) = H0 + u·Hc` with the constraint `|u| ≤ u_max` (`u_max` may be `∞`).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlHamiltonian {
    h0: HermitianOperator,
    hc: HermitianOperator,
    u_max: f64,
}

impl ControlHamiltonian {
    pub fn new(h0: HermitianOperator, hc: HermitianOperator, u_max: f64) -> Result<Self> {
        hc.ensure_dim(h0.dim())?;
        if u_max.is_nan() || u_max < 0.0 {
            return Err(Error::NegativeFieldBound(u_max));
        }
        Ok(Self { h0, hc, u_max })
    }

    pub fn unconstrained(h0: HermitianOperator, hc: HermitianOperator) -> Result<Self> {
        Self::new(h0, hc, f64::INFINITY)
    }

    pub fn drift(&self) -> &HermitianOperator {
        &self.h0
    }

    pub fn control(&self) -> &HermitianOperator {
        &self.hc
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn with_u_max(&self, u_max: f64) -> Result<Self> {
        Self::new(self.h0.clone(), self.hc.clone(), u_max)
    }

    /// `-H0 - u·Hc`; propagating with it undoes a forward evolution.
    pub fn negated(&self) -> Self {
        Self { h0: self.h0.scaled(-1.0), hc: self.hc.scaled(-1.0), u_max: self.u_max }
    }

    pub fn admits(&self, u: f64) -> bool {
        u.is_finite() && u.abs() <= self.u_max * (1.0 + FIELD_BOUND_SLACK)
    }

    /// `H0 + u·Hc` without checking the field bound.
    pub fn at(&self, u: f64) -> HermitianOperator {
        self.h0.plus_scaled(u, &self.hc).expect("dimensions checked at construction")
    }

    /// `H0 + u·Hc`, rejecting `|u| > u_max`.
    pub fn hamiltonian(&self, u: f64) -> Result<HermitianOperator> {
        if !self.admits(u) {
            return Err(Error::FieldBound { amplitude: u, u_max: self.u_max });
        }
        Ok(self.at(u))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub amplitude: f64,
}

impl Segment {
    pub fn new(duration: f64, amplitude: f64) -> Self {
        Self { duration, amplitude }
    }
}

/// Ordered list of `(duration, amplitude)` segments defining `u(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseConstantField {
    segments: Vec<Segment>,
}

impl PiecewiseConstantField {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(Error::BadDuration(s.duration));
            }
            if !s.amplitude.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// `α(T) = ∫ u dt`, exact for piecewise-constant fields.
    pub fn integrated_amplitude(&self) -> f64 {
        self.segments.iter().map(|s| s.duration * s.amplitude).sum()
    }

    pub fn max_abs_amplitude(&self) -> f64 {
        self.segments.iter().map(|s| s.amplitude.abs()).fold(0.0, f64::max)
    }

    /// Segments in reverse order.
    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().copied().collect() }
    }

    /// Field amplitude at time `t` (right-continuous; zero outside `[0, T)`).
    pub fn amplitude_at(&self, t: f64) -> f64 {
        let mut start = 0.0;
        for s in &self.segments {
            if t >= start && t < start + s.duration {
                return s.amplitude;
            }
            start += s.duration;
        }
        0.0
    }
}

/// Sampled solution of the Schrödinger equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<PureState>,
    amplitudes: Vec<f64>,
    segment: Vec<usize>,
    variance: Vec<f64>,
    survival: Vec<f64>,
}

impl Trajectory {
    /// Sample times, non-decreasing from 0 to T; segment boundaries repeat.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    /// Field amplitude in effect at each sample.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Index of the segment each sample belongs to.
    pub fn segment_indices(&self) -> &[usize] {
        &self.segment
    }

    /// `ΔE(t_k)` of `H(u_k)` in `ψ(t_k)`.
    pub fn variance_samples(&self) -> &[f64] {
        &self.variance
    }

    /// `P_t = |⟨ψ0|ψ(t_k)⟩|²`.
    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn initial_state(&self) -> &PureState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &PureState {
        self.states.last().expect("trajectories are never empty")
    }

    pub fn total_time(&self) -> f64 {
        *self.times.last().expect("trajectories are never empty")
    }

    /// Largest `|‖ψ(t_k)‖ − 1|`.
    pub fn max_norm_drift(&self) -> f64 {
        self.states.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Composite trapezoid rule over an arbitrary per-sample series.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        cumulative_trapezoid(&self.times, values).last().copied().unwrap_or(0.0)
    }
}

/// Running trapezoid integrals `∫_0^{t_k} f`, one entry per sample.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    debug_assert_eq!(times.len(), values.len());
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(times.len());
    if times.is_empty() {
        return out;
    }
    out.push(0.0);
    for k in 1..times.len() {
        acc += 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
        out.push(acc);
    }
    out
}

/// Propagate `psi0` under `H0 + u(t)·Hc`, sampling each segment at
/// `samples_per_segment + 1` evenly spaced points (both ends included).
pub fn propagate(
    ch: &ControlHamiltonian,
    field: &PiecewiseConstantField,
    psi0: &PureState,
    samples_per_segment: usize,
) -> Result<Trajectory> {
    psi0.ensure_dim(ch.dim())?;
    if field.is_empty() {
        return Err(Error::EmptyField);
    }
    if samples_per_segment == 0 {
        return Err(Error::ZeroSamples);
    }
    let n = samples_per_segment;
    let capacity = field.segments().len() * (n + 1);
    let mut traj = Trajectory {
        times: Vec::with_capacity(capacity),
        states: Vec::with_capacity(capacity),
        amplitudes: Vec::with_capacity(capacity),
        segment: Vec::with_capacity(capacity),
        variance: Vec::with_capacity(capacity),
        survival: Vec::with_capacity(capacity),
    };

    let mut start_time = 0.0;
    let mut current = psi0.clone();
    for (index, seg) in field.segments().iter().enumerate() {
        let h = ch.hamiltonian(seg.amplitude)?;
        let spec = h.spectral()?;
        let vectors = spec.eigenvectors();
        // Coefficients of the segment's starting state in the eigenbasis.
        let coeffs: Vec<C64> = vectors.iter().map(|v| v.inner(&current)).collect();

        let end_time = start_time + seg.duration;
        for k in 0..=n {
            let local = seg.duration * (k as f64) / (n as f64);
            let t = if k == n { end_time } else { start_time + local };
            let state = if k == 0 {
                current.clone()
            } else {
                let mut amps = alloc::vec![C64::new(0.0, 0.0); ch.dim()];
                for ((c, v), &lambda) in coeffs.iter().zip(vectors).zip(spec.eigenvalues()) {
                    let w = c * C64::from_polar(1.0, -lambda * local);
                    for (a, e) in amps.iter_mut().zip(v.amplitudes()) {
                        *a += w * e;
                    }
                }
                PureState::from_raw(amps)
            };
            traj.variance.push(quantum::variance_unchecked(&state, &h));
            traj.survival.push(psi0.fidelity(&state));
            traj.times.push(t);
            traj.amplitudes.push(seg.amplitude);
            traj.segment.push(index);
            traj.states.push(state);
        }
        current = traj.states.last().expect("segment produced samples").clone();
        start_time = end_time;
    }
    Ok(traj)
}

/// Path length `2 ∫ ΔE dt` (trapezoid over the variance samples).
pub fn path_length(traj: &Trajectory) -> f64 {
    2.0 * traj.integrate(&traj.variance)
}

/// Path length with the sample grid doubled until two successive estimates
/// differ by less than [`PATH_LENGTH_REFINE_TOL`]. Returns the estimate and
/// the samples per segment it was obtained with.
pub fn converged_path_length(
    ch: &ControlHamiltonian,
    field: &PiecewiseConstantField,
    psi0: &PureState,
) -> Result<(f64, usize)> {
    let mut n = DEFAULT_SAMPLES_PER_SEGMENT;
    let mut previous = path_length(&propagate(ch, field, psi0, n)?);
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        let next = path_length(&propagate(ch, field, psi0, n)?);
        if (next - previous).abs() < PATH_LENGTH_REFINE_TOL {
            return Ok((next, n));
        }
        previous = next;
    }
    Ok((previous, n))
}

/// Worst signed residual of a pointwise inequality `lhs ≤ rhs`, i.e. the
/// largest `lhs − rhs` seen. Non-positive means the inequality held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub max_residual: f64,
    pub at_time: f64,
    pub points_checked: usize,
}

impl Violation {
    fn none() -> Self {
        Self { max_residual: f64::NEG_INFINITY, at_time: 0.0, points_checked: 0 }
    }

    fn record(&mut self, residual: f64, t: f64) {
        self.points_checked += 1;
        if residual > self.max_residual {
            self.max_residual = residual;
            self.at_time = t;
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

/// Checks `d/dt arccos √P_t ≤ ΔE(t)` with central differences.
///
/// Only samples whose two neighbours lie inside the same segment are used,
/// since the derivative can jump at segment boundaries.
pub fn bhattacharyya_check(traj: &Trajectory) -> Result<Violation> {
    if traj.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, found: traj.len() });
    }
    let psi0 = traj.initial_state();
    let angle: Vec<f64> = traj.states.iter().map(|s| psi0.angle_to(s)).collect();
    let mut report = Violation::none();
    for k in 1..traj.len() - 1 {
        let seg = traj.segment[k];
        if traj.segment[k - 1] != seg || traj.segment[k + 1] != seg {
            continue;
        }
        let dt = traj.times[k + 1] - traj.times[k - 1];
        if dt <= 0.0 {
            continue;
        }
        let rate = (angle[k + 1] - angle[k - 1]) / dt;
        report.record(rate - traj.variance[k], traj.times[k]);
    }
    if report.points_checked == 0 {
        return Err(Error::TooFewSamples { needed: 3, found: traj.len() });
    }
    Ok(report)
}

/// Bhattacharyya check with the grid doubled (from the default density) until
/// the residual drops to `tol`. Returns the last report and its grid density.
pub fn bhattacharyya_refined(
    ch: &ControlHamiltonian,
    field: &PiecewiseConstantField,
    psi0: &PureState,
    tol: f64,
) -> Result<(Violation, usize)> {
    let mut n = DEFAULT_SAMPLES_PER_SEGMENT;
    let mut report = bhattacharyya_check(&propagate(ch, field, psi0, n)?)?;
    for _ in 0..MAX_DOUBLINGS {
        if report.holds(tol) {
            break;
        }
        n *= 2;
        report = bhattacharyya_check(&propagate(ch, field, psi0, n)?)?;
    }
    Ok((report, n))
}

/// Capped sine: `0` for `x ≤ 0`, `sin x` on `(0, π/2]`, `1` above.
pub fn sin_star(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x <= core::f64::consts::FRAC_PI_2 {
        x.sin()
    } else {
        1.0
    }
}

/// Per-sample overlap envelope for a reference state `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapEnvelope {
    pub delta: f64,
    /// `h(t_k) = min(∫ΔE_φ, ∫ΔE_ψ0)`.
    pub h: Vec<f64>,
    pub lower: Vec<f64>,
    pub overlap: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Envelope `sin*(δ − h(t)) ≤ |⟨φ|ψ(t)⟩| ≤ sin*(δ + h(t))` along a trajectory.
///
/// `ΔE_φ` and `ΔE_ψ0` are the spreads of the instantaneous Hamiltonian in the
/// fixed states `φ` and `ψ0`; `h(t)` is the smaller of their running integrals.
pub fn overlap_envelope(
    traj: &Trajectory,
    ch: &ControlHamiltonian,
    phi: &PureState,
) -> Result<OverlapEnvelope> {
    phi.ensure_dim(ch.dim())?;
    traj.initial_state().ensure_dim(ch.dim())?;
    let psi0 = traj.initial_state();

    let mut spread_phi = Vec::with_capacity(traj.len());
    let mut spread_psi0 = Vec::with_capacity(traj.len());
    let mut cache: Option<(usize, f64, f64)> = None;
    for k in 0..traj.len() {
        let seg = traj.segment[k];
        let (a, b) = match cache {
            Some((s, a, b)) if s == seg => (a, b),
            _ => {
                let h = ch.at(traj.amplitudes[k]);
                let a = quantum::variance_unchecked(phi, &h);
                let b = quantum::variance_unchecked(psi0, &h);
                cache = Some((seg, a, b));
                (a, b)
            }
        };
        spread_phi.push(a);
        spread_psi0.push(b);
    }
    let int_phi = cumulative_trapezoid(&traj.times, &spread_phi);
    let int_psi0 = cumulative_trapezoid(&traj.times, &spread_psi0);

    let delta = core::f64::consts::FRAC_PI_2 - phi.angle_to(psi0);
    let h: Vec<f64> = int_phi.iter().zip(&int_psi0).map(|(a, b)| a.min(*b)).collect();
    let lower = h.iter().map(|&h| sin_star(delta - h)).collect();
    let upper = h.iter().map(|&h| sin_star(delta + h)).collect();
    let overlap = traj.states.iter().map(|s| phi.overlap(s)).collect();
    Ok(OverlapEnvelope { delta, h, lower, overlap, upper })
}

/// Largest violation of the overlap envelope, signed (`≤ 0` means contained).
pub fn pfeifer_envelope_check(
    traj: &Trajectory,
    ch: &ControlHamiltonian,
    phi: &PureState,
) -> Result<Violation> {
    let env = overlap_envelope(traj, ch, phi)?;
    let mut report = Violation::none();
    for k in 0..traj.len() {
        let below = env.lower[k] - env.overlap[k];
        let above = env.overlap[k] - env.upper[k];
        report.record(below.max(above), traj.times[k]);
    }
    Ok(report)
}

/// Fidelity below which [`tqsl_star`] flags a missed target.
pub const TARGET_FIDELITY_TOL: f64 = 1e-6;

/// Geodesic-over-path QSL time of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslTime {
    pub time: f64,
    /// `|⟨ψ_g|ψ(T)⟩|²`.
    pub target_fidelity: f64,
    /// Set when the trajectory misses the target by more than
    /// [`TARGET_FIDELITY_TOL`]; the time is still computed.
    pub missed_target: bool,
}

/// `T*_QSL = arccos |⟨ψ0|ψ(T)⟩| / mean(ΔE)`, equivalently `s_geod / s_path · T`.
///
/// Zero path length with a nonzero geodesic yields `+∞`; zero for both yields 0.
pub fn tqsl_star(traj: &Trajectory, psi_g: &PureState) -> Result<QslTime> {
    psi_g.ensure_dim(traj.dim())?;
    let target_fidelity = psi_g.fidelity(traj.final_state());
    let angle = traj.initial_state().angle_to(traj.final_state());
    let integral = traj.integrate(&traj.variance);
    let total = traj.total_time();
    let time = if integral > 0.0 {
        angle * total / integral
    } else if angle > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(QslTime {
        time,
        target_fidelity,
        missed_target: target_fidelity < 1.0 - TARGET_FIDELITY_TOL,
    })
}
