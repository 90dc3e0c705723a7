//! Exact arithmetic in F_p and in truncated Laurent series F_p((X)).
//!
//! Absolute values are handled as integer valuations throughout; nothing in
//! this module (or downstream) touches floating point. We normalize
//! `|X| = p^{-1}`, so `|x| = p^{-v(x)}`.

mod fp;
mod literal;
mod series;

pub use fp::{FpElement, PrimeField};
pub use literal::parse_series;
pub use series::{AbsValue, LaurentSeries, Prec};
