//! Seeded random-instance suites for the trajectory-level inequalities.
//!
//! Instance `k` draws from its own ChaCha stream (`seed`, stream `k`), so the
//! report is identical for any thread count.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use qsl_core::bounds::{self, BoundInputs, FLAG_TOL};
use qsl_core::dynamics::{
    bhattacharyya_refined, path_length, pfeifer_envelope_check, propagate, ControlHamiltonian,
    PiecewiseConstantField, Segment,
};
use qsl_core::quantum::{self, fubini_study_distance};
use qsl_core::{HermitianOperator, Matrix, PureState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::fmt_float;

pub const MAX_DIM: usize = 8;
const MAX_SEGMENTS: usize = 4;
/// Grid density for the envelope and geodesic suites; `ΔE` is constant per
/// segment, so the trapezoid integrals are exact at any density.
const SAMPLES: usize = 64;
/// Failing instance indices listed per suite.
const LISTED_FAILURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Brody,
    NormDrift,
    TimeReversal,
    AnandanAharonov,
    PfeiferEnvelope,
    Bhattacharyya,
    ArenzOverlap,
    Dominance,
}

impl Suite {
    const ALL: [Suite; 8] = [
        Suite::Brody,
        Suite::NormDrift,
        Suite::TimeReversal,
        Suite::AnandanAharonov,
        Suite::PfeiferEnvelope,
        Suite::Bhattacharyya,
        Suite::ArenzOverlap,
        Suite::Dominance,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Brody => "brody",
            Suite::NormDrift => "norm-drift",
            Suite::TimeReversal => "time-reversal",
            Suite::AnandanAharonov => "anandan-aharonov",
            Suite::PfeiferEnvelope => "pfeifer-envelope",
            Suite::Bhattacharyya => "bhattacharyya",
            Suite::ArenzOverlap => "arenz-overlap",
            Suite::Dominance => "dominance",
        }
    }

    fn tolerance(self) -> f64 {
        match self {
            Suite::Brody | Suite::NormDrift => 1e-10,
            Suite::TimeReversal | Suite::ArenzOverlap => FLAG_TOL,
            Suite::AnandanAharonov | Suite::PfeiferEnvelope | Suite::Dominance => 1e-6,
            Suite::Bhattacharyya => 1e-4,
        }
    }
}

/// Worst residual of one suite (`lhs − rhs` of its inequality; `≤ tol` passes).
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_residual: f64,
    pub failures: Vec<usize>,
    pub errors: Vec<(usize, String)>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub seed: u64,
    pub instances: usize,
    pub suites: Vec<SuiteSummary>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteSummary::passed)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "seed {} instances {} max dim {MAX_DIM}", self.seed, self.instances);
        for suite in &self.suites {
            let verdict = if suite.passed() { "PASS" } else { "FAIL" };
            let _ = write!(
                s,
                "{verdict}  {:<17} max residual {}  tol {:e}",
                suite.name,
                fmt_float(suite.max_residual),
                suite.tolerance
            );
            if !suite.failures.is_empty() {
                let shown: Vec<String> =
                    suite.failures.iter().take(LISTED_FAILURES).map(|k| k.to_string()).collect();
                let _ = write!(s, "  failing instances {} [{}]", suite.failures.len(), shown.join(" "));
            }
            for (k, e) in suite.errors.iter().take(LISTED_FAILURES) {
                let _ = write!(s, "  instance {k}: {e}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "result {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

fn hermitian(rng: &mut ChaCha8Rng, d: usize) -> HermitianOperator {
    let a = Matrix::from_fn(d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    HermitianOperator::new((&a + &a.adjoint()).scale(0.5)).expect("symmetrized by construction")
}

fn state(rng: &mut ChaCha8Rng, d: usize) -> PureState {
    loop {
        let amps: Vec<C64> =
            (0..d).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        if amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3 {
            return PureState::normalized(amps).expect("non-zero amplitudes");
        }
    }
}

fn field(rng: &mut ChaCha8Rng) -> PiecewiseConstantField {
    let n = rng.random_range(1..=MAX_SEGMENTS);
    let segments =
        (0..n).map(|_| Segment::new(rng.random_range(0.05..1.0), rng.random_range(-2.0..2.0))).collect();
    PiecewiseConstantField::new(segments).expect("positive durations")
}

struct Instance {
    ch: ControlHamiltonian,
    psi0: PureState,
    phi: PureState,
    field: PiecewiseConstantField,
}

fn instance(seed: u64, index: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let d = rng.random_range(2..=MAX_DIM);
    let h0 = hermitian(&mut rng, d);
    let hc = hermitian(&mut rng, d);
    let psi0 = state(&mut rng, d);
    let phi = state(&mut rng, d);
    let field = field(&mut rng);
    let ch = ControlHamiltonian::new(h0, hc, field.max_abs_amplitude()).expect("matching dimensions");
    Instance { ch, psi0, phi, field }
}

fn residuals(inst: &Instance) -> qsl_core::Result<[f64; 8]> {
    let Instance { ch, psi0, phi, field } = inst;
    let traj = propagate(ch, field, psi0, SAMPLES)?;
    let target = traj.final_state();
    let t = traj.total_time();

    let brody = field
        .segments()
        .iter()
        .map(|s| {
            let h = ch.at(s.amplitude);
            quantum::energy_variance(psi0, &h).map(|e| 2.0 * e - SQRT_2 * h.hs_norm())
        })
        .collect::<qsl_core::Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);

    let back = propagate(&ch.negated(), &field.reversed(), target, 1)?;
    let reversal = back
        .final_state()
        .amplitudes()
        .iter()
        .zip(psi0.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();

    let aa = fubini_study_distance(psi0, target)? - path_length(&traj);
    let envelope = pfeifer_envelope_check(&traj, ch, phi)?.max_residual;
    let (bh, _) = bhattacharyya_refined(ch, field, psi0, Suite::Bhattacharyya.tolerance())?;
    let arenz = bounds::arenz_overlap_inequality_check(&traj, ch, field, target)?.residual();

    let inputs = BoundInputs::new(ch.clone(), psi0.clone(), target.clone())?;
    let dominance = [
        bounds::tmin_a(&inputs)?,
        bounds::tmin_b(&inputs)?,
        bounds::tmin_c1(&inputs)?,
        bounds::tmin_c2(&inputs)?,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max)
        - t;

    Ok([brody, traj.max_norm_drift(), reversal, aa, envelope, bh.max_residual, arenz, dominance])
}

/// Run every suite on `instances` seeded random instances (`d ≤ 8`).
pub fn run_property_suites(seed: u64, instances: usize) -> PropertyReport {
    let results: Vec<qsl_core::Result<[f64; 8]>> =
        (0..instances).into_par_iter().map(|k| residuals(&instance(seed, k))).collect();
    let suites = Suite::ALL
        .iter()
        .enumerate()
        .map(|(j, &suite)| {
            let mut summary = SuiteSummary {
                name: suite.name(),
                tolerance: suite.tolerance(),
                max_residual: f64::NEG_INFINITY,
                failures: Vec::new(),
                errors: Vec::new(),
            };
            for (k, r) in results.iter().enumerate() {
                match r {
                    Ok(values) => {
                        let v = values[j];
                        summary.max_residual = summary.max_residual.max(v);
                        if !(v <= suite.tolerance()) {
                            summary.failures.push(k);
                        }
                    }
                    Err(e) => summary.errors.push((k, e.to_string())),
                }
            }
            summary
        })
        .collect();
    PropertyReport { seed, instances, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = run_property_suites(7, 12).text();
        let b = run_property_suites(7, 12).text();
        assert_eq!(a, b);
        assert_ne!(a, run_property_suites(8, 12).text());
    }

    #[test]
    fn small_run_passes() {
        let r = run_property_suites(42, 20);
        assert!(r.passed(), "{}", r.text());
        assert_eq!(r.suites.len(), Suite::ALL.len());
    }

    #[test]
    fn single_instance_report() {
        let r = run_property_suites(1, 1);
        assert!(r.passed(), "{}", r.text());
        assert_eq!(r.text().lines().count(), Suite::ALL.len() + 2);
    }

    #[test]
    fn instances_stay_within_dimension_cap() {
        for k in 0..50 {
            let inst = instance(3, k);
            assert!((2..=MAX_DIM).contains(&inst.ch.dim()));
        }
    }
}
