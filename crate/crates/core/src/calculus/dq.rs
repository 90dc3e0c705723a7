//! Directional difference quotients and their iterates.
//!
//! Flat layout of a level-k tuple (fixed here once and for all, and targeted
//! by the transport maps): z = (a, b, t) with a and b flat level-(k-1)
//! tuples and t the trailing scalar, so the recursion reads
//! `q_k(z) = (q_{k-1}(a + t b) - q_{k-1}(a)) / t`.

use crate::domains::bracket_len;
use crate::error::{EngineError, Result};
use crate::field::LaurentSeries;
use crate::MapKd;

fn certified_nonzero(t: &LaurentSeries, what: &str) -> Result<()> {
    if t.valuation().is_some() {
        Ok(())
    } else {
        Err(EngineError::UndecidableAtPrecision(format!(
            "{what} has no known nonzero coefficient"
        )))
    }
}

/// (f(x + t y) - f(x)) / t on a strict triple.
pub fn difference_quotient(
    f: &dyn MapKd,
    x: &[LaurentSeries],
    y: &[LaurentSeries],
    t: &LaurentSeries,
) -> Result<Vec<LaurentSeries>> {
    assert_eq!(x.len(), f.arity());
    assert_eq!(y.len(), f.arity());
    certified_nonzero(t, "difference-quotient parameter t")?;
    let shifted: Vec<LaurentSeries> = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| xi.add(&t.mul(yi)))
        .collect();
    let inv = t.inv()?;
    let at_shift = f.eval(&shifted)?;
    let at_base = f.eval(x)?;
    Ok(at_shift
        .iter()
        .zip(&at_base)
        .map(|(u, v)| u.sub(v).mul(&inv))
        .collect())
}

/// The k-fold iterate on a flat level-k tuple.
pub fn iterated_quotient(f: &dyn MapKd, k: usize, z: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
    let d = f.arity();
    if z.len() != bracket_len(d, k) {
        return Err(EngineError::Shape(format!(
            "level-{k} tuple over K^{d} needs {} scalars, got {}",
            bracket_len(d, k),
            z.len()
        )));
    }
    if k == 0 {
        return f.eval(z);
    }
    let half = bracket_len(d, k - 1);
    let (a, rest) = z.split_at(half);
    let (b, t) = rest.split_at(half);
    let t = &t[0];
    certified_nonzero(t, "iterated-quotient parameter t")?;
    let shifted: Vec<LaurentSeries> = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| ai.add(&t.mul(bi)))
        .collect();
    let inv = t.inv()?;
    let hi = iterated_quotient(f, k - 1, &shifted)?;
    let lo = iterated_quotient(f, k - 1, a)?;
    Ok(hi
        .iter()
        .zip(&lo)
        .map(|(u, v)| u.sub(v).mul(&inv))
        .collect())
}
