//! Quantum speed limits and a-priori lower bounds on quantum control times.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`quantum`]: pure states, Hermitian operators, a Jacobi eigensolver and
//!   the geometric primitives (Fubini–Study distance, energy mean/variance,
//!   Hilbert–Schmidt norm, exact propagators).
//! - [`dynamics`]: exact propagation under piecewise-constant control fields
//!   and trajectory-level checks of the speed-limit inequalities.
//! - [`bounds`]: Mandelstam–Tamm, Margolus–Levitin, and the control-time bounds
//!   `t_min^A`, `t_min^B`, `t_min^C1`, `t_min^C2` for `H(u) = H0 + u·Hc`.
//! - [`two_level`]: the driven two-level (Landau–Zener) problem with its
//!   time-optimal protocols and closed-form bound expressions.
//!
//! Units follow ħ = 1 throughout.

#![no_std]
#![deny(rust_2018_idioms)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod dynamics;
mod error;
pub mod quantum;
pub mod two_level;

pub use error::{Error, Result};
pub use quantum::{C64, HermitianOperator, Matrix, PureState, SpectralDecomposition, Unitary};
