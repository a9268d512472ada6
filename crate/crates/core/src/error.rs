use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("size out of range: {0}")]
    Size(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is singular (rank {rank} < {dim})")]
    Rank { rank: usize, dim: usize },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not divisible by the generating polynomial (residual {residual:.3e})")]
    NotDivisible { residual: f64 },
    #[error("symbol is not group-invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },
    #[error("point lies on the branch locus (|J| = {jacobian:.3e})")]
    SingularPoint { jacobian: f64 },
    #[error("symbol exponent {exponent} exceeds truncation {truncation}")]
    Truncation { exponent: usize, truncation: usize },
    #[error("interior margin {given} is smaller than required {required}")]
    Margin { given: usize, required: usize },
    #[error("symbol has a mixed term and is not G-pluriharmonic")]
    NotPluriharmonic,
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
