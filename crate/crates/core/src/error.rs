//! Error type shared across the engine.

use thiserror::Error;

/// Every fallible engine operation reports one of these.
///
/// The precision-related variants signal that the *inputs* carried too few
/// known coefficients to decide the question, not that the question itself
/// is ill-posed; callers can retry with more precision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("p must be a prime in [2, 2^31): got {p}")]
    InvalidModulus { p: u64 },

    #[error("{0}")]
    InvalidConfig(String),

    #[error("zero divisor to precision O(X^{prec}): supply more input precision")]
    ZeroDivisorToPrecision { prec: i64 },

    #[error("division by exact zero")]
    DivisionByExactZero,

    #[error("inverse of an exact non-monomial series has unbounded support; truncate first")]
    ExactInverse,

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("undecidable at available precision: {0}")]
    UndecidableAtPrecision(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("sampler exhausted after {attempts} rejections")]
    SamplerExhausted { attempts: u32 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("syntax error at position {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },

    #[error("variable x{index} at position {pos} exceeds arity {arity}")]
    Arity { pos: usize, index: usize, arity: usize },
}

impl EngineError {
    /// True for errors that more input precision could resolve.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            EngineError::ZeroDivisorToPrecision { .. }
                | EngineError::UndecidableAtPrecision(_)
                | EngineError::InsufficientPrecision(_)
                | EngineError::SamplerExhausted { .. }
                | EngineError::ExactInverse
        )
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
