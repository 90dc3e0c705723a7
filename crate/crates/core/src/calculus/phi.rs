//! Iterated quotients in Ludkovsky's style: only the scalar parameters
//! vary, the directions stay fixed across levels.

use crate::error::{EngineError, Result};
use crate::field::LaurentSeries;
use crate::MapKd;

/// The k-th quotient with base point `x`, directions `xi_1..xi_k`, and
/// scalars `t_1..t_k`, computed purely from raw quotients: every t_i must be
/// certified nonzero. Level 1 is the plain directional quotient.
pub fn ludkovsky_quotient(
    f: &dyn MapKd,
    x: &[LaurentSeries],
    xis: &[Vec<LaurentSeries>],
    ts: &[LaurentSeries],
) -> Result<Vec<LaurentSeries>> {
    assert_eq!(x.len(), f.arity());
    assert_eq!(xis.len(), ts.len());
    let k = ts.len();
    if k == 0 {
        return Err(EngineError::Shape(
            "ludkovsky quotient needs at least one (direction, scalar) pair".into(),
        ));
    }
    for (i, t) in ts.iter().enumerate() {
        if t.valuation().is_none() {
            return Err(EngineError::UndecidableAtPrecision(format!(
                "scalar t_{} has no known nonzero coefficient",
                i + 1
            )));
        }
    }
    if k == 1 {
        return super::dq::difference_quotient(f, x, &xis[0], &ts[0]);
    }
    let t = &ts[k - 1];
    let xi = &xis[k - 1];
    let shifted: Vec<LaurentSeries> = x
        .iter()
        .zip(xi)
        .map(|(a, b)| a.add(&t.mul(b)))
        .collect();
    let inv = t.inv()?;
    let hi = ludkovsky_quotient(f, &shifted, &xis[..k - 1], &ts[..k - 1])?;
    let lo = ludkovsky_quotient(f, x, &xis[..k - 1], &ts[..k - 1])?;
    Ok(hi
        .iter()
        .zip(&lo)
        .map(|(u, v)| u.sub(v).mul(&inv))
        .collect())
}
