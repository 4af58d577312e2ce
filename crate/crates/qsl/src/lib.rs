//! Sweeps, single-case verification, seeded property suites and the CSV/text
//! formats around [`qsl_core`].

// `!(x <= tol)` is used on purpose: it also counts NaN as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod props;
pub mod report;
pub mod sweep;
pub mod verify;

mod error;

pub use config::{LambdaSpec, SweepConfig, ThetaGrid};
pub use error::{HarnessError, Result};
