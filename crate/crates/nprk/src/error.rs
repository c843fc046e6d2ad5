use num_complex::Complex64;

/// Errors produced by the nprk library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("underlying abscissae differ: max |c1_i - c2_i| = {0:.3e}")]
    AbscissaMismatch(f64),

    #[error("method is not in the restricted diagonally-implicit ansatz: {0}")]
    NotInAnsatz(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("PRK pair weight vectors differ: max |b_i - bhat_i| = {0:.3e}")]
    SharedWeightViolation(f64),

    #[error("singular interpolation system while recovering the stability numerator")]
    SingularInterpolation,

    #[error("zero diagonal entry in the implicit tableau at stage {0}")]
    ZeroDiagonal(usize),

    #[error("stability function pole at z1 = {0}, z2 = {1}")]
    PoleEncountered(Complex64, Complex64),

    #[error("stability limit diverges (numerator degree exceeds denominator degree)")]
    DivergentLimit,

    #[error("problem dimension {0} exceeds the dense eigensolve guard of {1}")]
    DimensionTooLarge(usize, usize),

    #[error("implicit solve diverged at stage {stage}: {detail}")]
    SolverDiverged { stage: usize, detail: String },

    #[error("problem does not provide a required capability: {0}")]
    MissingCapability(&'static str),

    #[error("singular linear system")]
    Singular,

    #[error("Newton iteration hit the limit of {max_iter} iterations (residual {residual:.3e})")]
    MaxIterExceeded { max_iter: u32, residual: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),

    #[error("unknown method '{0}'")]
    UnknownMethod(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported method structure: {0}")]
    UnsupportedStructure(&'static str),

    #[error("invalid method data: {0}")]
    InvalidMethod(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
