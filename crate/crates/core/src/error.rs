use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is too small (need at least 2)")]
    DimensionTooSmall(usize),

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix data has {len} entries, not a square of dimension {dim}")]
    BadShape { dim: usize, len: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("ground state is degenerate (gap {gap:e})")]
    DegenerateGround { gap: f64 },

    #[error("field amplitude {amplitude} exceeds bound {u_max}")]
    FieldBound { amplitude: f64, u_max: f64 },

    #[error("field bound must be non-negative, got {0}")]
    NegativeFieldBound(f64),

    #[error("segment duration must be positive and finite, got {0}")]
    BadDuration(f64),

    #[error("control field has no segments")]
    EmptyField,

    #[error("trajectory has {found} samples, need at least {needed}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("samples per segment must be positive")]
    ZeroSamples,

    #[error("energy argument must be positive, got {0}")]
    NonPositiveEnergy(f64),

    #[error("drift Hamiltonian is zero")]
    ZeroDrift,

    #[error("control Hamiltonian is zero")]
    ZeroControl,

    #[error("states are not eigenstates of the control Hamiltonian (residual {residual:e})")]
    NotControlEigenstate { residual: f64 },

    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("protocol requested for the wrong regime: {0}")]
    WrongRegime(&'static str),

    #[error("{name} argument {value} outside its domain")]
    DomainViolation { name: &'static str, value: f64 },
}
