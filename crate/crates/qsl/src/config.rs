//! Sweep configuration: a flat JSON file, overridden field by field from the
//! command line.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use qsl_core::two_level::{DEFAULT_U0_FACTOR, DOMAIN_TOL};
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

pub const DEFAULT_THETA_MARGIN: f64 = 0.02;
pub const DEFAULT_THETA_COUNT: usize = 50;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_OUTPUT: &str = "qsl_sweep.csv";

/// How the field cap Λ is chosen at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", content = "value", rename_all = "kebab-case")]
pub enum LambdaSpec {
    Unconstrained,
    /// `Λ = factor · Δ²/(4γ)`, recomputed per θ.
    CriticalMultiple(f64),
    Absolute(f64),
}

impl LambdaSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            LambdaSpec::Unconstrained => Ok(()),
            LambdaSpec::CriticalMultiple(v) | LambdaSpec::Absolute(v) if v > 0.0 && v.is_finite() => Ok(()),
            LambdaSpec::CriticalMultiple(v) => Err(invalid(format!("lambda factor must be positive, got {v}"))),
            LambdaSpec::Absolute(v) => Err(invalid(format!("lambda must be positive, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl ThetaGrid {
    pub fn single(theta: f64) -> Self {
        Self { min: theta, max: theta, count: 1 }
    }

    /// Evenly spaced points, both ends included.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.max } else { self.min + step * k as f64 })
            .collect()
    }
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self {
            min: DEFAULT_THETA_MARGIN,
            max: FRAC_PI_2 - DEFAULT_THETA_MARGIN,
            count: DEFAULT_THETA_COUNT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub delta: f64,
    pub lambda: LambdaSpec,
    pub theta: ThetaGrid,
    /// Kick amplitude of the unconstrained surrogate protocol.
    pub u0: f64,
    pub output_path: PathBuf,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            lambda: LambdaSpec::Unconstrained,
            theta: ThetaGrid::default(),
            u0: DEFAULT_U0_FACTOR,
            output_path: PathBuf::from(DEFAULT_OUTPUT),
            seed: DEFAULT_SEED,
        }
    }
}

impl SweepConfig {
    /// Checks shared by sweeps and single cases.
    fn validate_common(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(invalid(format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.u0 > 0.0 && self.u0.is_finite()) {
            return Err(invalid(format!("u0 must be positive, got {}", self.u0)));
        }
        self.lambda.validate()
    }

    /// Sweep invariants: `0 < θ_min < θ_max ≤ π/2` and at least two points.
    pub fn validate(&self) -> Result<()> {
        self.validate_common()?;
        let g = &self.theta;
        if g.count < 2 {
            return Err(invalid(format!("theta grid needs at least 2 points, got {}", g.count)));
        }
        if !(g.min > 0.0 && g.min < g.max && g.max <= FRAC_PI_2 + DOMAIN_TOL) {
            return Err(invalid(format!(
                "theta grid must satisfy 0 < min < max <= pi/2, got [{}, {}]",
                g.min, g.max
            )));
        }
        Ok(())
    }

    /// The single θ of a one-point configuration.
    pub fn single_theta(&self) -> Result<f64> {
        self.validate_common()?;
        let g = &self.theta;
        if g.count != 1 {
            return Err(invalid("a single case needs --theta".into()));
        }
        if !(g.min > 0.0 && g.min <= FRAC_PI_2 + DOMAIN_TOL) {
            return Err(invalid(format!("theta must lie in (0, pi/2], got {}", g.min)));
        }
        Ok(g.min.min(FRAC_PI_2))
    }
}

/// Every configurable field, all optional. The same shape is read from a
/// config file and filled from command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub delta: Option<f64>,
    /// `unconstrained`, `critical-multiple` or `absolute`.
    pub lambda_mode: Option<String>,
    pub lambda_value: Option<f64>,
    pub theta: Option<f64>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_count: Option<usize>,
    pub u0: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::ConfigFile { path: path.to_owned(), source })?;
        serde_json::from_str(&text)
            .map_err(|source| HarnessError::ConfigSyntax { path: path.to_owned(), source })
    }

    /// Fields set in `top` win over fields set in `self`.
    pub fn overlay(self, top: ConfigLayer) -> Self {
        // A newly chosen mode must not inherit the old mode's value.
        let (lambda_mode, lambda_value) = match (top.lambda_mode, top.lambda_value) {
            (Some(m), v) => (Some(m), v),
            (None, Some(v)) => (self.lambda_mode, Some(v)),
            (None, None) => (self.lambda_mode, self.lambda_value),
        };
        // Likewise a grid on top discards a single θ underneath, and vice versa.
        let top_grid = top.theta_min.is_some() || top.theta_max.is_some() || top.theta_count.is_some();
        let theta = if top_grid { top.theta } else { top.theta.or(self.theta) };
        let keep_grid = top.theta.is_none();
        let grid = |t: Option<f64>, s: Option<f64>| if keep_grid { t.or(s) } else { t };
        Self {
            delta: top.delta.or(self.delta),
            lambda_mode,
            lambda_value,
            theta,
            theta_min: grid(top.theta_min, self.theta_min),
            theta_max: grid(top.theta_max, self.theta_max),
            theta_count: if keep_grid { top.theta_count.or(self.theta_count) } else { top.theta_count },
            u0: top.u0.or(self.u0),
            output_path: top.output_path.or(self.output_path),
            seed: top.seed.or(self.seed),
        }
    }

    pub fn resolve(self) -> Result<SweepConfig> {
        let defaults = SweepConfig::default();
        let delta = self.delta.unwrap_or(defaults.delta);
        let lambda = match (self.lambda_mode.as_deref(), self.lambda_value) {
            (None, None) | (Some("unconstrained"), None) => LambdaSpec::Unconstrained,
            (Some("unconstrained"), Some(_)) => {
                return Err(invalid("unconstrained mode takes no lambda value".into()))
            }
            (Some("critical-multiple"), Some(v)) => LambdaSpec::CriticalMultiple(v),
            (Some("absolute") | None, Some(v)) => LambdaSpec::Absolute(v),
            (Some(m @ ("critical-multiple" | "absolute")), None) => {
                return Err(invalid(format!("lambda mode {m} needs a lambda value")))
            }
            (Some(other), _) => return Err(invalid(format!("unknown lambda mode {other:?}"))),
        };
        let theta = match self.theta {
            Some(t) => {
                if self.theta_min.is_some() || self.theta_max.is_some() || self.theta_count.is_some() {
                    return Err(invalid("theta conflicts with theta_min/theta_max/theta_count".into()));
                }
                ThetaGrid::single(t)
            }
            None => ThetaGrid {
                min: self.theta_min.unwrap_or(defaults.theta.min),
                max: self.theta_max.unwrap_or(defaults.theta.max),
                count: self.theta_count.unwrap_or(defaults.theta.count),
            },
        };
        Ok(SweepConfig {
            delta,
            lambda,
            theta,
            u0: self.u0.unwrap_or(DEFAULT_U0_FACTOR * delta),
            output_path: self.output_path.unwrap_or(defaults.output_path),
            seed: self.seed.unwrap_or(defaults.seed),
        })
    }
}

fn invalid(msg: String) -> HarnessError {
    HarnessError::Config(msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_hit_both_ends() {
        let g = ThetaGrid { min: 0.1, max: 1.3, count: 7 };
        let p = g.points();
        assert_eq!(p.len(), 7);
        assert_eq!(p[0], 0.1);
        assert_eq!(p[6], 1.3);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn defaults_are_valid() {
        let cfg = ConfigLayer::default().resolve().unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.u0, 1e4);
        assert_eq!(cfg.lambda, LambdaSpec::Unconstrained);
    }

    #[test]
    fn u0_default_scales_with_delta() {
        let cfg = ConfigLayer { delta: Some(2.5), ..Default::default() }.resolve().unwrap();
        assert_eq!(cfg.u0, 2.5e4);
    }

    #[test]
    fn cli_overrides_file() {
        let file: ConfigLayer = serde_json::from_str(
            r#"{"delta": 2.0, "lambda_mode": "critical-multiple", "lambda_value": 6.0, "theta_count": 10}"#,
        )
        .unwrap();
        let cli = ConfigLayer { lambda_mode: Some("absolute".into()), lambda_value: Some(0.3), ..Default::default() };
        let cfg = file.overlay(cli).resolve().unwrap();
        assert_eq!(cfg.delta, 2.0);
        assert_eq!(cfg.lambda, LambdaSpec::Absolute(0.3));
        assert_eq!(cfg.theta.count, 10);

        let file = ConfigLayer { theta_min: Some(0.1), theta_count: Some(5), ..Default::default() };
        let cli = ConfigLayer { theta: Some(0.7), ..Default::default() };
        let cfg = file.overlay(cli).resolve().unwrap();
        assert_eq!(cfg.theta, ThetaGrid::single(0.7));
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"delta": -1.0}"#,
            r#"{"theta_min": 1.0, "theta_max": 0.5}"#,
            r#"{"theta_count": 1}"#,
            r#"{"theta_max": 2.0}"#,
            r#"{"lambda_mode": "absolute", "lambda_value": 0.0}"#,
        ];
        for text in bad {
            let layer: ConfigLayer = serde_json::from_str(text).unwrap();
            assert!(layer.resolve().and_then(|c| c.validate()).is_err(), "{text}");
        }
        assert!(serde_json::from_str::<ConfigLayer>(r#"{"detla": 1.0}"#).is_err());
        let layer = ConfigLayer { lambda_mode: Some("critical-multiple".into()), ..Default::default() };
        assert!(layer.resolve().is_err());
    }

    #[test]
    fn single_theta_bounds() {
        let cfg = ConfigLayer { theta: Some(FRAC_PI_2), ..Default::default() }.resolve().unwrap();
        assert_eq!(cfg.single_theta().unwrap(), FRAC_PI_2);
        assert!(ConfigLayer::default().resolve().unwrap().single_theta().is_err());
        let cfg = ConfigLayer { theta: Some(0.0), ..Default::default() }.resolve().unwrap();
        assert!(cfg.single_theta().is_err());
    }
}
