//! Hölder-exponent estimation as integer linear algebra on valuations.
//!
//! In the ultrametric setting every sup-norm value is a power of p, so a
//! bound |f(x)-f(y)| <= p^c |x-y|^s reads v_out >= s*v_in - c on valuation
//! pairs. Deep pairs (v_in >= prec/2) pin the exponent; the constant is then
//! fitted over the whole sample, which makes the report self-certifying.

use super::{ceil_div, Rational};
use crate::domains::{BallDomain, Sampler};
use crate::error::{EngineError, Result};
use crate::report::ProbeReport;
use crate::MapKd;
use serde_json::json;

/// Candidate exponents: half-integers up to 4, largest first.
const CANDIDATE_HALVES: std::ops::RangeInclusive<i64> = 1..=8;

/// The additive slack granted on deep pairs: one power of p, matching the
/// one-unit loss an integer floor can inflict on an exact power law.
const DEEP_SLACK: i64 = 1;

#[derive(Clone, Debug)]
pub struct HolderReport {
    /// Recorded (v_in, v_out) pairs with both valuations certified.
    pub pairs: Vec<(i64, i64)>,
    /// Pairs whose output difference stayed zero to precision.
    pub skipped: usize,
    /// Estimated exponent, a half-integer.
    pub exponent: Rational,
    /// log_p of the fitted constant.
    pub log_p_constant: i64,
    /// Smallest v_out/v_in over deep pairs.
    pub deep_slope_min: Option<Rational>,
    pub field_p: u64,
    pub prec: i64,
    pub seed: u64,
}

impl HolderReport {
    pub fn to_probe(&self) -> ProbeReport {
        ProbeReport {
            check: "holder".into(),
            params: json!({
                "field_p": self.field_p,
                "prec": self.prec,
                "seed": self.seed,
                "pairs": self.pairs.len(),
                "skipped": self.skipped,
            }),
            rows: self
                .pairs
                .iter()
                .map(|&(v_in, v_out)| json!({ "v_in": v_in, "v_out": v_out }))
                .collect(),
            verdict: format!(
                "exponent {} with constant p^{}: v_out >= {}*v_in - {} on every recorded pair",
                self.exponent, self.log_p_constant, self.exponent, self.log_p_constant
            ),
        }
    }
}

/// Estimates the Hölder exponent of `f` on `u` from engineered pairs at
/// controlled input valuations.
pub fn holder_estimate(
    f: &dyn MapKd,
    u: &BallDomain,
    samples: usize,
    prec: i64,
    seed: u64,
) -> Result<HolderReport> {
    assert_eq!(f.arity(), u.dim());
    let mut sampler = Sampler::new(u.field(), prec, seed);
    let m_lo = (0..u.dim()).map(|i| u.radius_exp(i)).max().unwrap().max(0);
    let m_hi = (prec - 4).max(m_lo);
    let mut pairs = Vec::new();
    let mut skipped = 0usize;
    for s in 0..samples {
        let m = m_lo + (s as i64 % (m_hi - m_lo + 1));
        let coord = s % u.dim();
        if u.radius_exp(coord) > m {
            continue;
        }
        let x = sampler.point(u);
        let mut y = x.clone();
        let offset = sampler.unit_with_valuation(m);
        let shifted = y[coord].add(&offset);
        y[coord] = shifted;
        let fx = f.eval(&x)?;
        let fy = f.eval(&y)?;
        match sup_norm_valuation(&fx, &fy) {
            Some(v_out) => pairs.push((m, v_out)),
            None => skipped += 1,
        }
    }
    if pairs.is_empty() {
        return Err(EngineError::InsufficientPrecision(
            "every sampled output difference was zero to precision".into(),
        ));
    }

    let deep_threshold = (prec / 2).max(1);
    let deep: Vec<(i64, i64)> = pairs
        .iter()
        .copied()
        .filter(|&(v_in, _)| v_in >= deep_threshold)
        .collect();
    let witnesses = if deep.is_empty() { &pairs } else { &deep };

    let mut exponent = Rational::new(0, 1);
    for num in CANDIDATE_HALVES.rev() {
        if witnesses
            .iter()
            .all(|&(v_in, v_out)| num * v_in - 2 * v_out <= 2 * DEEP_SLACK)
        {
            exponent = Rational::new(num, 2);
            break;
        }
    }

    let log_p_constant = pairs
        .iter()
        .map(|&(v_in, v_out)| ceil_div(exponent.num * v_in - exponent.den * v_out, exponent.den))
        .max()
        .unwrap()
        .max(0);

    // self-certification on the recorded sample
    for &(v_in, v_out) in &pairs {
        assert!(
            exponent.num * v_in - exponent.den * v_out <= exponent.den * log_p_constant,
            "fitted bound must cover every recorded pair"
        );
    }

    let deep_slope_min = deep
        .iter()
        .filter(|&&(v_in, _)| v_in > 0)
        .map(|&(v_in, v_out)| Rational::new(v_out, v_in))
        .reduce(|a, b| if b.lt(&a) { b } else { a });

    Ok(HolderReport {
        pairs,
        skipped,
        exponent,
        log_p_constant,
        deep_slope_min,
        field_p: u.field().modulus(),
        prec,
        seed,
    })
}

/// Valuation of the sup-norm difference, when certified: the smallest
/// componentwise valuation, sound only if no unknown window could undercut
/// it.
fn sup_norm_valuation(a: &[crate::field::LaurentSeries], b: &[crate::field::LaurentSeries]) -> Option<i64> {
    let mut best: Option<i64> = None;
    let mut bound: Option<i64> = None;
    for (x, y) in a.iter().zip(b) {
        match x.sub(y).abs_value() {
            crate::field::AbsValue::Finite(v) => {
                best = Some(best.map_or(v, |b| b.min(v)));
            }
            crate::field::AbsValue::ZeroToPrec(n) => {
                bound = Some(bound.map_or(n, |b| b.min(n)));
            }
            crate::field::AbsValue::Zero => {}
        }
    }
    match (best, bound) {
        (Some(v), Some(n)) if v < n => Some(v),
        (Some(_), Some(_)) => None,
        (Some(v), None) => Some(v),
        (None, _) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::field::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn identity_is_an_isometry() {
        let f = parse_expr("x1", f2(), 1).unwrap();
        let u = BallDomain::unit_ball(f2(), 1);
        let r = holder_estimate(&f, &u, 200, 32, 5).unwrap();
        assert_eq!(r.exponent, Rational::new(1, 1));
        assert_eq!(r.log_p_constant, 0);
    }

    #[test]
    fn char_two_square_doubles_valuations() {
        let f = parse_expr("x1^2", f2(), 1).unwrap();
        let u = BallDomain::unit_ball(f2(), 1);
        let r = holder_estimate(&f, &u, 200, 32, 5).unwrap();
        assert_eq!(r.exponent, Rational::new(2, 1));
    }

    #[test]
    fn coefficient_spreading_has_exponent_three_halves() {
        let f = parse_expr("phi32(x1)", f2(), 1).unwrap();
        let u = BallDomain::unit_ball(f2(), 1);
        let r = holder_estimate(&f, &u, 300, 64, 5).unwrap();
        assert_eq!(r.exponent, Rational::new(3, 2));
        assert!(r.log_p_constant <= 1);
    }
}
