//! θ sweeps of the two-level problem.

use qsl_core::bounds::{self, BoundInputs, BoundReport};
use qsl_core::dynamics::{propagate, Trajectory, DEFAULT_SAMPLES_PER_SEGMENT};
use qsl_core::two_level::{self, LandauZenerProblem, OptimalProtocol};
use rayon::prelude::*;

use crate::config::{LambdaSpec, SweepConfig};
use crate::Result;

/// The two-level problem at one grid point.
///
/// At `θ = π/2` (γ = 0) the critical field is infinite, so a critical-multiple
/// cap degenerates to an unbounded field. Initial and target state coincide
/// there and every bound is 0 regardless.
pub fn problem_for(cfg: &SweepConfig, theta: f64) -> Result<LandauZenerProblem> {
    let free = LandauZenerProblem::from_theta(cfg.delta, theta, f64::INFINITY)?;
    Ok(match cfg.lambda {
        LambdaSpec::Unconstrained => free,
        LambdaSpec::Absolute(v) => free.with_lambda(v)?,
        LambdaSpec::CriticalMultiple(_) if free.gamma() == 0.0 => free,
        LambdaSpec::CriticalMultiple(f) => free.with_lambda(f * free.critical_field())?,
    })
}

/// One fully evaluated instance: protocol, trajectory and bounds.
#[derive(Debug, Clone)]
pub struct Case {
    pub problem: LandauZenerProblem,
    pub inputs: BoundInputs,
    /// `None` for the trivial instance (`ψ0 = ψg`), which needs no field.
    pub protocol: Option<OptimalProtocol>,
    pub trajectory: Option<Trajectory>,
    pub report: BoundReport,
    /// `|⟨ψg|ψ(T)⟩|²`.
    pub fidelity: f64,
    pub tqsl_closed: f64,
}

impl Case {
    pub fn is_trivial(&self) -> bool {
        self.protocol.is_none()
    }

    pub fn regime_label(&self) -> &'static str {
        self.protocol.as_ref().map_or("trivial", |p| p.regime.as_str())
    }

    pub fn t_opt(&self) -> f64 {
        self.protocol.as_ref().map_or(0.0, OptimalProtocol::reference_time)
    }
}

/// The regime's optimal protocol, or `None` when the instance is trivial.
pub fn protocol_for(cfg: &SweepConfig, p: &LandauZenerProblem) -> Result<Option<OptimalProtocol>> {
    if p.gamma() == 0.0 {
        return Ok(None);
    }
    Ok(Some(two_level::optimal_protocol(p, cfg.u0)?))
}

/// Propagate `protocol` and evaluate every bound against its duration.
pub fn evaluate(
    problem: LandauZenerProblem,
    protocol: Option<OptimalProtocol>,
    samples_per_segment: usize,
) -> Result<Case> {
    let inputs = problem.bound_inputs()?;
    let (trajectory, fidelity, tqsl_closed) = match &protocol {
        Some(prot) => {
            let traj = propagate(&inputs.ch, &prot.field, &inputs.psi0, samples_per_segment)?;
            let fidelity = inputs.psig.fidelity(traj.final_state());
            (Some(traj), fidelity, two_level::tqsl_star_closed(&problem, prot))
        }
        None => (None, inputs.psig.fidelity(&inputs.psi0), 0.0),
    };
    let t_opt = protocol.as_ref().map_or(0.0, OptimalProtocol::reference_time);
    let report = bounds::compute_report(&inputs, trajectory.as_ref(), Some(t_opt));
    Ok(Case { problem, inputs, protocol, trajectory, report, fidelity, tqsl_closed })
}

pub fn build_case(cfg: &SweepConfig, theta: f64) -> Result<Case> {
    let problem = problem_for(cfg, theta)?;
    let protocol = protocol_for(cfg, &problem)?;
    evaluate(problem, protocol, DEFAULT_SAMPLES_PER_SEGMENT)
}

/// One CSV row. Bounds that failed to evaluate are `NaN` with an unset flag.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub gamma: f64,
    pub regime: &'static str,
    pub t_opt: f64,
    pub tqsl_closed: f64,
    pub tqsl_traj: f64,
    pub tmin_a: f64,
    pub tmin_b: f64,
    pub tmin_c1: f64,
    pub tmin_c2: f64,
    pub fidelity: f64,
    pub pass_a: Option<bool>,
    pub pass_b: Option<bool>,
    pub pass_c1: Option<bool>,
    pub pass_c2: Option<bool>,
}

impl SweepRow {
    pub fn from_case(theta: f64, case: &Case) -> Self {
        let r = &case.report;
        let value = |b: &qsl_core::Result<f64>| b.as_ref().copied().unwrap_or(f64::NAN);
        let tqsl_traj = match &r.t_qsl_star {
            Some(Ok(q)) => q.time,
            Some(Err(_)) => f64::NAN,
            None => 0.0,
        };
        Self {
            theta,
            gamma: case.problem.gamma(),
            regime: case.regime_label(),
            t_opt: case.t_opt(),
            tqsl_closed: case.tqsl_closed,
            tqsl_traj,
            tmin_a: value(&r.t_min_a),
            tmin_b: value(&r.t_min_b),
            tmin_c1: value(&r.t_min_c1),
            tmin_c2: value(&r.t_min_c2),
            fidelity: case.fidelity,
            pass_a: r.flags.a,
            pass_b: r.flags.b,
            pass_c1: r.flags.c1,
            pass_c2: r.flags.c2,
        }
    }

    pub fn all_pass(&self) -> bool {
        [self.pass_a, self.pass_b, self.pass_c1, self.pass_c2].iter().all(|f| *f == Some(true))
    }
}

/// Rows in grid order; computed in parallel, identical for identical configs.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.theta
        .points()
        .into_par_iter()
        .map(|theta| build_case(cfg, theta).map(|case| SweepRow::from_case(theta, &case)))
        .collect()
}
