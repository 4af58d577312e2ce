//! Driven two-level system `H(u) = u·σz + (Δ/2)·σx`.
//!
//! The task is to steer the ground state of `H(−γ)` into the ground state of
//! `H(+γ)` as fast as possible. With `tan θ = Δ/(2γ)` the two states are a
//! Fubini–Study distance `π − 2θ` apart. The time-optimal fields are known in
//! closed form:
//!
//! - unconstrained `u`: a composite pulse of two δ-like kicks around a free
//!   evolution of duration `(π − 2θ)/Δ`;
//! - `|u| ≤ Λ` with `Λ ≥ Δ²/(4γ)`: bang-off-bang;
//! - `|u| ≤ Λ` with `Λ < Δ²/(4γ)`: bang-bang.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::bounds::BoundInputs;
use crate::dynamics::{ControlHamiltonian, PiecewiseConstantField, Segment};
use crate::quantum::{HermitianOperator, PureState};
use crate::{Error, Result};

/// Round-off allowance on `arcsin`/`arctan` arguments and angle domains.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Default kick amplitude for the unconstrained protocol, in units of Δ.
pub const DEFAULT_U0_FACTOR: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    ThetaToGamma,
    GammaToTheta,
}

/// `tan θ = Δ/(2γ)` in either direction; `θ = π/2 ↔ γ = 0`.
pub fn theta_gamma_convert(delta: f64, value: f64, direction: Conversion) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter { name: "delta", value: delta });
    }
    match direction {
        Conversion::ThetaToGamma => {
            if !(value > 0.0 && value <= FRAC_PI_2 + DOMAIN_TOL) {
                return Err(Error::InvalidParameter { name: "theta", value });
            }
            if (FRAC_PI_2 - value).abs() <= DOMAIN_TOL {
                return Ok(0.0);
            }
            Ok(delta * value.cos() / (2.0 * value.sin()))
        }
        Conversion::GammaToTheta => {
            if !(value >= 0.0) {
                return Err(Error::InvalidParameter { name: "gamma", value });
            }
            Ok(delta.atan2(2.0 * value))
        }
    }
}

/// Parameters of the two-level control problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauZenerProblem {
    delta: f64,
    gamma: f64,
    theta: f64,
    lambda_cap: f64,
}

impl LandauZenerProblem {
    pub fn from_theta(delta: f64, theta: f64, lambda_cap: f64) -> Result<Self> {
        let gamma = theta_gamma_convert(delta, theta, Conversion::ThetaToGamma)?;
        let theta = theta.min(FRAC_PI_2);
        Self::checked(delta, gamma, theta, lambda_cap)
    }

    pub fn from_gamma(delta: f64, gamma: f64, lambda_cap: f64) -> Result<Self> {
        let theta = theta_gamma_convert(delta, gamma, Conversion::GammaToTheta)?;
        Self::checked(delta, gamma, theta, lambda_cap)
    }

    /// Field cap fixed as a multiple of the critical value `Δ²/(4γ)`.
    pub fn with_critical_factor(delta: f64, theta: f64, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter { name: "lambda factor", value: factor });
        }
        let p = Self::from_theta(delta, theta, f64::INFINITY)?;
        if p.gamma == 0.0 {
            return Err(Error::InvalidParameter { name: "gamma", value: 0.0 });
        }
        p.with_lambda(factor * p.critical_field())
    }

    fn checked(delta: f64, gamma: f64, theta: f64, lambda_cap: f64) -> Result<Self> {
        if lambda_cap.is_nan() || lambda_cap <= 0.0 {
            return Err(Error::InvalidParameter { name: "lambda", value: lambda_cap });
        }
        Ok(Self { delta, gamma, theta, lambda_cap })
    }

    pub fn with_lambda(&self, lambda_cap: f64) -> Result<Self> {
        Self::checked(self.delta, self.gamma, self.theta, lambda_cap)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda_cap(&self) -> f64 {
        self.lambda_cap
    }

    pub fn is_constrained(&self) -> bool {
        self.lambda_cap.is_finite()
    }

    /// `Δ²/(4γ)`, the cap separating bang-bang from bang-off-bang.
    pub fn critical_field(&self) -> f64 {
        if self.gamma == 0.0 {
            f64::INFINITY
        } else {
            self.delta * self.delta / (4.0 * self.gamma)
        }
    }

    /// `s(θ) = π − 2θ`.
    pub fn geodesic(&self) -> f64 {
        core::f64::consts::PI - 2.0 * self.theta
    }

    /// `(Δ/2)σx` as drift, `σz` as control, `|u| ≤ Λ`.
    pub fn control_hamiltonian(&self) -> ControlHamiltonian {
        ControlHamiltonian::new(
            HermitianOperator::pauli_x().scaled(self.delta / 2.0),
            HermitianOperator::pauli_z(),
            self.lambda_cap,
        )
        .expect("2x2 operators with a positive cap")
    }

    pub fn bound_inputs(&self) -> Result<BoundInputs> {
        let (psi0, psig) = boundary_states(self)?;
        BoundInputs::new(self.control_hamiltonian(), psi0, psig)
    }

    /// Regime the constrained optimum falls into; `None` when unconstrained.
    pub fn regime(&self) -> Regime {
        if !self.is_constrained() {
            Regime::UnconstrainedComposite
        } else if self.lambda_cap >= self.critical_field() {
            Regime::BangOffBang
        } else {
            Regime::BangBang
        }
    }
}

/// `u·σz + (Δ/2)·σx`.
pub fn lz_hamiltonian(p: &LandauZenerProblem, u: f64) -> Result<HermitianOperator> {
    p.control_hamiltonian().hamiltonian(u)
}

/// `(|g_{−γ}⟩, |g_{+γ}⟩)`, the ground states of `H(∓γ)` (field bound not applied).
pub fn boundary_states(p: &LandauZenerProblem) -> Result<(PureState, PureState)> {
    if !(p.delta > 0.0) {
        return Err(Error::InvalidParameter { name: "delta", value: p.delta });
    }
    let ch = p.control_hamiltonian();
    Ok((ch.at(-p.gamma).ground_state()?, ch.at(p.gamma).ground_state()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    UnconstrainedComposite,
    BangOffBang,
    BangBang,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::UnconstrainedComposite => "unconstrained",
            Regime::BangOffBang => "bang-off-bang",
            Regime::BangBang => "bang-bang",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Time-optimal field `(+u, t_bang), (0, t_off), (−u, t_bang)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalProtocol {
    pub regime: Regime,
    pub field: PiecewiseConstantField,
    /// Total field duration.
    pub t_opt: f64,
    /// Duration of each bang (`T_Λ`, or the kick time `t0` of the composite pulse).
    pub t_lambda: f64,
    /// Free-evolution duration between the bangs.
    pub t_off: f64,
    /// `(π − 2θ)/Δ`, the `u0 → ∞` optimum; only for the unconstrained regime.
    pub ideal_t_opt: Option<f64>,
}

impl OptimalProtocol {
    /// The time the bounds are compared against: the ideal limit for the
    /// unconstrained surrogate, the field duration otherwise.
    pub fn reference_time(&self) -> f64 {
        self.ideal_t_opt.unwrap_or(self.t_opt)
    }
}

fn three_segment_field(amplitude: f64, t_bang: f64, t_off: f64) -> Result<PiecewiseConstantField> {
    let mut segments = alloc::vec::Vec::with_capacity(3);
    if t_bang > 0.0 {
        segments.push(Segment::new(t_bang, amplitude));
    }
    if t_off > 0.0 {
        segments.push(Segment::new(t_off, 0.0));
    }
    if t_bang > 0.0 {
        segments.push(Segment::new(t_bang, -amplitude));
    }
    PiecewiseConstantField::new(segments)
}

/// Composite pulse for unbounded `u`: kicks `±u0` of length `t0 = π/(4u0)`
/// around a free evolution of `(π − 2θ)/Δ`.
pub fn unconstrained_protocol(p: &LandauZenerProblem, u0: f64) -> Result<OptimalProtocol> {
    if p.is_constrained() {
        return Err(Error::WrongRegime("unconstrained protocol needs an unbounded field"));
    }
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(Error::InvalidParameter { name: "u0", value: u0 });
    }
    let t0 = FRAC_PI_4 / u0;
    let free = p.geodesic() / p.delta;
    let field = three_segment_field(u0, t0, free)?;
    Ok(OptimalProtocol {
        regime: Regime::UnconstrainedComposite,
        t_opt: field.total_duration(),
        field,
        t_lambda: t0,
        t_off: free,
        ideal_t_opt: Some(free),
    })
}

fn clamped_unit(name: &'static str, x: f64) -> Result<f64> {
    if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&x) {
        return Err(Error::DomainViolation { name, value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Bang durations `(T_Λ, T_off)` for a finite cap.
pub fn constrained_times(p: &LandauZenerProblem) -> Result<(Regime, f64, f64)> {
    if !p.is_constrained() {
        return Err(Error::WrongRegime("constrained protocol needs a finite field cap"));
    }
    if !(p.gamma > 0.0) {
        return Err(Error::InvalidParameter { name: "gamma", value: p.gamma });
    }
    let (lambda, gamma, delta) = (p.lambda_cap, p.gamma, p.delta);
    let q = delta * delta / 4.0;
    let energy_sq = lambda * lambda + q;
    let energy = energy_sq.sqrt();
    match p.regime() {
        Regime::BangOffBang => {
            let arg = clamped_unit("arcsin", energy_sq / (2.0 * lambda * (lambda + gamma)))?;
            let t_lambda = arg.sqrt().asin() / energy;
            let numerator = lambda * gamma - q;
            let t_off = if numerator <= 0.0 {
                0.0
            } else {
                let root = lambda * lambda + 2.0 * lambda * gamma - q;
                (2.0 / delta) * (numerator / ((delta / 2.0) * root.sqrt())).atan()
            };
            Ok((Regime::BangOffBang, t_lambda, t_off))
        }
        Regime::BangBang => {
            let arg = clamped_unit("arcsin", gamma * energy_sq / ((delta * delta / 2.0) * (lambda + gamma)))?;
            Ok((Regime::BangBang, arg.sqrt().asin() / energy, 0.0))
        }
        Regime::UnconstrainedComposite => unreachable!("finite cap checked above"),
    }
}

/// Hegerfeldt's time-optimal protocol for `|u| ≤ Λ`.
pub fn constrained_protocol(p: &LandauZenerProblem) -> Result<OptimalProtocol> {
    let (regime, t_lambda, t_off) = constrained_times(p)?;
    let field = three_segment_field(p.lambda_cap, t_lambda, t_off)?;
    Ok(OptimalProtocol {
        regime,
        t_opt: 2.0 * t_lambda + t_off,
        field,
        t_lambda,
        t_off,
        ideal_t_opt: None,
    })
}

/// Regime-appropriate optimal protocol (`u0` only matters when unconstrained).
pub fn optimal_protocol(p: &LandauZenerProblem, u0: f64) -> Result<OptimalProtocol> {
    if p.is_constrained() {
        constrained_protocol(p)
    } else {
        unconstrained_protocol(p, u0)
    }
}

/// Closed-form bounds for this problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormBounds {
    pub tmin_a: f64,
    pub tmin_b: f64,
    pub tmin_c1: f64,
    pub tmin_c2: f64,
}

pub fn closed_form_bounds(p: &LandauZenerProblem) -> ClosedFormBounds {
    let half_geodesic = (FRAC_PI_2 - p.theta).max(0.0);
    let (s, c) = (p.theta.sin(), p.theta.cos());
    let dh = p.delta / 2.0;
    let limit_zero = |den: f64| if den.is_infinite() || half_geodesic == 0.0 { 0.0 } else { half_geodesic / den };
    let u = p.lambda_cap;
    ClosedFormBounds {
        tmin_a: limit_zero((dh * dh + u * u).sqrt()),
        tmin_b: limit_zero(dh * c + u * s),
        tmin_c1: (1.0 - s).max(0.0) / (SQRT_2 / 2.0 * p.delta),
        tmin_c2: 0.0,
    }
}

/// `T*_QSL` of the optimal protocol from its closed-form expression.
pub fn tqsl_star_closed(p: &LandauZenerProblem, protocol: &OptimalProtocol) -> f64 {
    let s = p.geodesic();
    if s <= 0.0 {
        return 0.0;
    }
    let (sin, cos) = (p.theta.sin(), p.theta.cos());
    match protocol.regime {
        Regime::UnconstrainedComposite => {
            let t1 = protocol.ideal_t_opt.unwrap_or(s / p.delta);
            s * t1 / (s + core::f64::consts::PI * sin)
        }
        Regime::BangOffBang => {
            let spread = p.lambda_cap * sin + p.delta / 2.0 * cos;
            s * protocol.t_opt / (4.0 * spread * protocol.t_lambda + p.delta * protocol.t_off)
        }
        Regime::BangBang => s / (2.0 * (p.lambda_cap * sin + p.delta / 2.0 * cos)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use crate::dynamics::propagate;
    use crate::quantum::fubini_study_distance;
    use core::f64::consts::{FRAC_PI_6, PI};

    #[test]
    fn conversion_examples() {
        assert_eq!(theta_gamma_convert(1.0, 0.0, Conversion::GammaToTheta).unwrap(), FRAC_PI_2);
        assert!((theta_gamma_convert(1.0, 0.5, Conversion::GammaToTheta).unwrap() - FRAC_PI_4).abs() < 1e-15);
        let g = theta_gamma_convert(1.0, FRAC_PI_6, Conversion::ThetaToGamma).unwrap();
        assert!((g - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert_eq!(theta_gamma_convert(1.0, FRAC_PI_2, Conversion::ThetaToGamma).unwrap(), 0.0);
        assert!(theta_gamma_convert(1.0, 0.0, Conversion::ThetaToGamma).is_err());
        assert!(theta_gamma_convert(1.0, 2.0, Conversion::ThetaToGamma).is_err());
        assert!(theta_gamma_convert(-1.0, 0.5, Conversion::ThetaToGamma).is_err());
    }

    #[test]
    fn theta_gamma_consistency() {
        for k in 1..50 {
            let theta = 0.03 * k as f64;
            let p = LandauZenerProblem::from_theta(1.3, theta, 1.0).unwrap();
            assert!((p.delta() / (2.0 * p.gamma()) - theta.tan()).abs() <= 1e-12 * theta.tan().max(1.0));
            let back = LandauZenerProblem::from_gamma(1.3, p.gamma(), 1.0).unwrap();
            assert!((back.theta() - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let p = LandauZenerProblem::from_theta(1.0, 0.5, 3.0).unwrap();
        let h = lz_hamiltonian(&p, 0.0).unwrap();
        assert_eq!(h, HermitianOperator::pauli_x().scaled(0.5));
        let h = lz_hamiltonian(&p, 2.0).unwrap();
        let ev = h.spectral().unwrap();
        assert!((ev.eigenvalues()[1] - 4.25f64.sqrt()).abs() < 1e-14);
        assert!((ev.eigenvalues()[0] + 4.25f64.sqrt()).abs() < 1e-14);
        assert!((h.hs_norm() - 8.5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(lz_hamiltonian(&p, 3.5), Err(Error::FieldBound { .. })));
    }

    #[test]
    fn boundary_state_distance() {
        let p = LandauZenerProblem::from_theta(1.0, FRAC_PI_2, f64::INFINITY).unwrap();
        let (a, b) = boundary_states(&p).unwrap();
        assert!(fubini_study_distance(&a, &b).unwrap() < 1e-15);
        let p = LandauZenerProblem::from_theta(1.0, FRAC_PI_4, f64::INFINITY).unwrap();
        let (a, b) = boundary_states(&p).unwrap();
        assert!((fubini_study_distance(&a, &b).unwrap() - FRAC_PI_2).abs() < 1e-10);
        let p = LandauZenerProblem::from_theta(1.0, 1e-7, f64::INFINITY).unwrap();
        let (a, b) = boundary_states(&p).unwrap();
        assert!((fubini_study_distance(&a, &b).unwrap() - PI).abs() < 1e-6);
    }

    #[test]
    fn unconstrained_examples() {
        let p = LandauZenerProblem::from_theta(1.0, 1e-9, f64::INFINITY).unwrap();
        let proto = unconstrained_protocol(&p, 1e4).unwrap();
        assert!((proto.ideal_t_opt.unwrap() - PI).abs() < 1e-8);
        let p = LandauZenerProblem::from_theta(1.0, FRAC_PI_4, f64::INFINITY).unwrap();
        let proto = unconstrained_protocol(&p, 1e4).unwrap();
        assert!((proto.ideal_t_opt.unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((proto.t_opt - proto.field.total_duration()).abs() < 1e-12);
        let (psi0, psig) = boundary_states(&p).unwrap();
        let traj = propagate(&p.control_hamiltonian(), &proto.field, &psi0, 50).unwrap();
        assert!(psig.fidelity(traj.final_state()) >= 0.999);

        let capped = p.with_lambda(2.0).unwrap();
        assert!(matches!(unconstrained_protocol(&capped, 1e4), Err(Error::WrongRegime(_))));
    }

    #[test]
    fn regime_boundary_continuity() {
        let p = LandauZenerProblem::from_theta(1.0, 0.6, 1.0).unwrap();
        let crit = p.critical_field();
        let at = p.with_lambda(crit).unwrap();
        let (regime, t_l, t_off) = constrained_times(&at).unwrap();
        assert_eq!(regime, Regime::BangOffBang);
        assert_eq!(t_off, 0.0);
        // Bang-bang formula evaluated at the same cap.
        let e = (crit * crit + 0.25).sqrt();
        let bb = (p.gamma() * e * e / (0.5 * (crit + p.gamma()))).sqrt().asin() / e;
        assert!((t_l - bb).abs() < 1e-12);

        let below = constrained_protocol(&p.with_lambda(crit * (1.0 - 1e-10)).unwrap()).unwrap();
        let above = constrained_protocol(&p.with_lambda(crit * (1.0 + 1e-10)).unwrap()).unwrap();
        assert_eq!(below.regime, Regime::BangBang);
        assert_eq!(above.regime, Regime::BangOffBang);
        assert!((below.t_opt - above.t_opt).abs() < 1e-8);
    }

    #[test]
    fn constrained_protocols_reach_target() {
        for &factor in &[6.0, 0.2] {
            let p = LandauZenerProblem::with_critical_factor(1.0, 0.5f64.atan(), factor).unwrap();
            assert!((p.gamma() - 1.0).abs() < 1e-12);
            let proto = constrained_protocol(&p).unwrap();
            let expected = if factor > 1.0 { Regime::BangOffBang } else { Regime::BangBang };
            assert_eq!(proto.regime, expected);
            let (psi0, psig) = boundary_states(&p).unwrap();
            let traj = propagate(&p.control_hamiltonian(), &proto.field, &psi0, 50).unwrap();
            assert!(psig.fidelity(traj.final_state()) >= 0.999);
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = LandauZenerProblem::from_theta(1.0, 1e-12, f64::INFINITY).unwrap();
        let c = closed_form_bounds(&p);
        assert_eq!(c.tmin_b, 0.0);
        assert!((c.tmin_c1 - SQRT_2).abs() < 1e-10);
        let c = closed_form_bounds(&p.with_lambda(1e-300).unwrap());
        assert!((c.tmin_b - PI).abs() < 1e-10);

        let p = LandauZenerProblem::from_theta(1.0, FRAC_PI_2, 1.0).unwrap();
        let c = closed_form_bounds(&p);
        assert_eq!((c.tmin_a, c.tmin_b, c.tmin_c1, c.tmin_c2), (0.0, 0.0, 0.0, 0.0));

        let p = LandauZenerProblem::from_theta(1.0, FRAC_PI_6, 1.0).unwrap();
        let c = closed_form_bounds(&p);
        assert!((c.tmin_b - (PI / 3.0) / (3f64.sqrt() / 4.0 + 0.5)).abs() < 1e-14);
        assert!((c.tmin_b - 1.1224).abs() < 1e-4);
    }

    #[test]
    fn closed_forms_match_generic_bounds() {
        let p = LandauZenerProblem::from_theta(1.0, 0.7, 0.9).unwrap();
        let c = closed_form_bounds(&p);
        let i = p.bound_inputs().unwrap();
        assert!((bounds::tmin_a(&i).unwrap() - c.tmin_a).abs() < 1e-12);
        assert!((bounds::tmin_b(&i).unwrap() - c.tmin_b).abs() < 1e-12);
        assert!((bounds::tmin_c1(&i).unwrap() - c.tmin_c1).abs() < 1e-12);
        assert_eq!(bounds::tmin_c2(&i).unwrap(), c.tmin_c2);
    }

    #[test]
    fn tqsl_closed_examples() {
        let p = LandauZenerProblem::from_theta(1.0, 1e-12, f64::INFINITY).unwrap();
        let proto = unconstrained_protocol(&p, 1e4).unwrap();
        assert!((tqsl_star_closed(&p, &proto) - PI).abs() < 1e-10);

        let p = LandauZenerProblem::with_critical_factor(1.0, 0.8, 0.2).unwrap();
        let proto = constrained_protocol(&p).unwrap();
        assert!((tqsl_star_closed(&p, &proto) - closed_form_bounds(&p).tmin_b).abs() < 1e-12);

        let p = LandauZenerProblem::from_theta(1.0, FRAC_PI_2, f64::INFINITY).unwrap();
        let proto = unconstrained_protocol(&p, 1e4).unwrap();
        assert_eq!(tqsl_star_closed(&p, &proto), 0.0);
    }
}
