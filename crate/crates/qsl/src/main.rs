use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qsl::config::ConfigLayer;
use qsl::props::run_property_suites;
use qsl::report::{emit_report, emit_trajectory};
use qsl::sweep::run_sweep;
use qsl::verify::{verify_case, VerifyOptions};
use qsl_core::dynamics::DEFAULT_SAMPLES_PER_SEGMENT;

/// Speed limits and control-time bounds for the driven two-level system.
#[derive(Parser)]
#[command(name = "qsl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep θ and write the CSV table plus a summary sidecar.
    Sweep(Common),
    /// Run one protocol through every inequality check; nonzero exit on failure.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Multiply the bang durations (e.g. 0.5 for a negative control).
        #[arg(long, default_value_t = 1.0)]
        scale_t_lambda: f64,
        /// Also write the sampled trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_SEGMENT)]
        samples: usize,
    },
    /// Seeded random-instance property suites; nonzero exit on failure.
    Proptest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Args)]
struct Common {
    /// JSON file with any of the configuration keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, conflicts_with_all = ["theta_min", "theta_max", "theta_count"])]
    theta: Option<f64>,
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    theta_count: Option<usize>,
    /// Field cap as a multiple of Δ²/(4γ), held fixed across θ.
    #[arg(long, conflicts_with_all = ["lambda", "unconstrained"])]
    lambda_factor: Option<f64>,
    /// Absolute field cap.
    #[arg(long, conflicts_with = "unconstrained")]
    lambda: Option<f64>,
    #[arg(long)]
    unconstrained: bool,
    /// Kick amplitude of the unconstrained surrogate (default 10⁴·Δ).
    #[arg(long)]
    u0: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn layer(&self) -> ConfigLayer {
        let (lambda_mode, lambda_value) = if self.unconstrained {
            (Some("unconstrained".to_owned()), None)
        } else if let Some(f) = self.lambda_factor {
            (Some("critical-multiple".to_owned()), Some(f))
        } else if let Some(v) = self.lambda {
            (Some("absolute".to_owned()), Some(v))
        } else {
            (None, None)
        };
        ConfigLayer {
            delta: self.delta,
            lambda_mode,
            lambda_value,
            theta: self.theta,
            theta_min: self.theta_min,
            theta_max: self.theta_max,
            theta_count: self.theta_count,
            u0: self.u0,
            output_path: self.out.clone(),
            seed: self.seed,
        }
    }

    fn resolve(&self) -> anyhow::Result<qsl::SweepConfig> {
        let base = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        Ok(base.overlay(self.layer()).resolve()?)
    }
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Sweep(common) => {
            let cfg = common.resolve()?;
            let rows = run_sweep(&cfg)?;
            let sidecar = emit_report(&rows, &cfg, &cfg.output_path)?;
            let failing = rows.iter().filter(|r| !r.all_pass()).count();
            println!(
                "wrote {} rows to {} (summary {})",
                rows.len(),
                cfg.output_path.display(),
                sidecar.display()
            );
            if failing > 0 {
                println!("{failing} rows have a bound above t_opt");
            }
            Ok(true)
        }
        Command::Verify { common, scale_t_lambda, trajectory, samples } => {
            let cfg = common.resolve()?;
            let opts = VerifyOptions { scale_t_lambda, samples_per_segment: samples };
            let v = verify_case(&cfg, &opts)?;
            print!("{}", v.text);
            if let Some(path) = trajectory {
                match &v.case.trajectory {
                    Some(traj) => emit_trajectory(traj, &path)?,
                    None => println!("trivial instance, no trajectory written"),
                }
            }
            if let Some(path) = &common.out {
                write_text(path, &v.text)?;
            }
            Ok(v.passed())
        }
        Command::Proptest { common, count } => {
            anyhow::ensure!(count >= 1, "--count must be at least 1");
            let cfg = common.resolve()?;
            let report = run_property_suites(cfg.seed, count);
            let text = report.text();
            print!("{text}");
            if let Some(path) = &common.out {
                write_text(path, &text)?;
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
