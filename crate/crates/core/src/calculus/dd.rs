//! Partial divided differences on block points, computed two independent
//! ways: the direct sum over mixed selections with reciprocal products, and
//! the first-coordinate-available recursion. The two must agree exactly on
//! every strict tuple.

use crate::domains::{BlockPoint, MultiIndex};
use crate::error::{EngineError, Result};
use crate::field::LaurentSeries;
use crate::MapKd;

/// Guards shared by both routes: every within-block pair must be certified
/// distinct before anything is inverted.
fn require_strict(x: &BlockPoint) -> Result<()> {
    if x.is_strict() {
        Ok(())
    } else {
        Err(EngineError::UndecidableAtPrecision(
            "block point is not certified strict: a within-block difference has no known nonzero coefficient".into(),
        ))
    }
}

/// A computed value of K^e is useless when a component is zero to a
/// non-positive bound: the window says nothing at all.
fn require_informative(value: &[LaurentSeries]) -> Result<()> {
    for v in value {
        if v.is_zero_to_prec() && v.prec().finite().is_some_and(|n| n <= 0) {
            return Err(EngineError::InsufficientPrecision(
                "result is zero to a non-positive precision bound".into(),
            ));
        }
    }
    Ok(())
}

fn scale_value(value: &[LaurentSeries], w: &LaurentSeries) -> Vec<LaurentSeries> {
    value.iter().map(|v| v.mul(w)).collect()
}

fn add_values(a: &mut Option<Vec<LaurentSeries>>, b: Vec<LaurentSeries>) {
    *a = Some(match a.take() {
        None => b,
        Some(acc) => acc.iter().zip(&b).map(|(x, y)| x.add(y)).collect(),
    });
}

/// The direct sum formula: over every mixed selection (j_1, ..., j_d),
/// weight f(x^{(1)}_{j_1}, ..., x^{(d)}_{j_d}) by the product over each
/// block of 1/(x^{(i)}_{j_i} - x^{(i)}_{k}) for k != j_i.
pub fn divided_difference(f: &dyn MapKd, x: &BlockPoint) -> Result<Vec<LaurentSeries>> {
    assert_eq!(f.arity(), x.alpha().dim(), "arity mismatch");
    if x.alpha().order() == 0 {
        return f.eval(x.flat());
    }
    require_strict(x)?;
    let mut acc: Option<Vec<LaurentSeries>> = None;
    for picks in x.selections() {
        let mut weight: Option<LaurentSeries> = None;
        for (i, &j) in picks.iter().enumerate() {
            let block = x.block(i);
            for (k, other) in block.iter().enumerate() {
                if k == j {
                    continue;
                }
                let inv = block[j].sub(other).inv()?;
                weight = Some(match weight {
                    None => inv,
                    Some(w) => w.mul(&inv),
                });
            }
        }
        let value = f.eval(&x.selection(&picks))?;
        let term = match weight {
            None => value,
            Some(w) => scale_value(&value, &w),
        };
        add_values(&mut acc, term);
    }
    let result = acc.expect("at least one selection");
    require_informative(&result)?;
    Ok(result)
}

/// The same quantity through the recursion: split off the last entry of the
/// first block with a positive index and divide a difference of two
/// lower-order values by x^{(i)}_0 - x^{(i)}_{alpha_i}.
pub fn divided_difference_recursive(f: &dyn MapKd, x: &BlockPoint) -> Result<Vec<LaurentSeries>> {
    assert_eq!(f.arity(), x.alpha().dim(), "arity mismatch");
    require_strict(x)?;
    let result = dd_rec(f, x)?;
    require_informative(&result)?;
    Ok(result)
}

fn dd_rec(f: &dyn MapKd, x: &BlockPoint) -> Result<Vec<LaurentSeries>> {
    let alpha = x.alpha();
    let Some(i) = alpha.first_positive() else {
        return f.eval(x.flat());
    };
    let mut beta_entries = alpha.entries().to_vec();
    beta_entries[i] -= 1;
    let beta = MultiIndex::new(beta_entries);

    let start = alpha.block_start(i);
    let last = start + alpha.entry(i) as usize;

    // first argument: drop x^{(i)}_{alpha_i}; second: it replaces x^{(i)}_0
    let mut first = x.flat().to_vec();
    first.remove(last);
    let mut second = x.flat().to_vec();
    second[start] = second[last].clone();
    second.remove(last);

    let a = dd_rec(f, &BlockPoint::new(beta.clone(), first)?)?;
    let b = dd_rec(f, &BlockPoint::new(beta, second)?)?;
    let inv = x.flat()[start].sub(&x.flat()[last]).inv()?;
    Ok(a.iter()
        .zip(&b)
        .map(|(u, v)| u.sub(v).mul(&inv))
        .collect())
}

/// A divided difference viewed as a map of the flat tuple, so higher
/// differences can be taken of it.
pub struct DividedDifferenceMap<'a> {
    f: &'a dyn MapKd,
    alpha: MultiIndex,
}

impl<'a> DividedDifferenceMap<'a> {
    pub fn new(f: &'a dyn MapKd, alpha: MultiIndex) -> Self {
        assert_eq!(f.arity(), alpha.dim());
        DividedDifferenceMap { f, alpha }
    }
}

impl MapKd for DividedDifferenceMap<'_> {
    fn arity(&self) -> usize {
        self.alpha.flat_len()
    }

    fn coarity(&self) -> usize {
        self.f.coarity()
    }

    fn eval(&self, point: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let x = BlockPoint::new(self.alpha.clone(), point.to_vec())?;
        divided_difference(self.f, &x)
    }
}
