use thiserror::Error;

/// Errors raised by the numerical and channel layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Kraus operators are not trace preserving (completeness residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("{count} Kraus operators exceed the maximum d^2 = {max}")]
    TooManyOperators { count: usize, max: usize },

    #[error("Choi matrix does not reduce to I/d on the input factor (residual {residual:.3e})")]
    NotTracePreservingImage { residual: f64 },

    #[error("mixing matrix is not an isometry (residual {residual:.3e})")]
    NotIsometry { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("invalid arity: {0}")]
    BadArity(String),

    #[error("at least 3 samples are required, got {0}")]
    BadSampleCount(usize),

    #[error("phase grid is not uniform over [0, 2pi) (deviation {deviation:.3e})")]
    NonUniformGrid { deviation: f64 },

    #[error("pattern has {0} samples, at least 3 are required")]
    TooFewSamples(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
