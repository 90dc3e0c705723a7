//! Exact difference calculus over the local fields F_p((X)).
//!
//! The crate provides truncated Laurent-series arithmetic with rigorous
//! precision tracking, an expression front-end for maps K^d -> K^e, the
//! partial-divided-difference and iterated-quotient calculi with the affine
//! transport between them, and valuation-exact regularity probes, including
//! the packaged demonstration that the coefficient-spreading map `phi32` is
//! smooth in the fixed-direction sense while its second divided differences
//! blow up near 0.

pub mod calculus;
pub mod domains;
pub mod error;
pub mod expr;
pub mod field;
pub mod regularity;
pub mod report;
pub mod runtime;

pub use error::{EngineError, Result};
pub use expr::MapKd;
