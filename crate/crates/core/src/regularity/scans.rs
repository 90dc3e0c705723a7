//! Boundedness scans for divided differences over separation sweeps, and
//! the fixed blow-up scan that refutes second-order regularity of the
//! coefficient-spreading map.

use crate::calculus::divided_difference;
use crate::domains::{BallDomain, BlockPoint, MultiIndex, Sampler};
use crate::error::{EngineError, Result};
use crate::expr::parse_expr;
use crate::field::{LaurentSeries, PrimeField};
use crate::report::ProbeReport;
use crate::runtime::parallel_map;
use crate::MapKd;
use serde::Serialize;
use serde_json::json;

/// One row of a separation sweep: at pairwise distance >= p^{-level}, the
/// largest observed |dd| is p^{max_log_abs}.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanRow {
    pub level: i64,
    pub max_log_abs: Option<i64>,
    pub samples: usize,
}

/// Sup of |f^{>alpha<}| over sampled strict tuples whose within-block
/// differences have valuation at most `level`, for each level in the sweep.
/// Each level also probes the deterministic coalescing family
/// (c, c + X^n, c + X^n + X^{n+3}, ...) pinned at n = level. Monotone growth
/// across rows is the unboundedness signal.
pub fn dd_boundedness_scan(
    f: &dyn MapKd,
    alpha: &MultiIndex,
    u: &BallDomain,
    levels: &[i64],
    samples_per_level: usize,
    prec: i64,
    seed: u64,
) -> Result<Vec<ScanRow>> {
    assert_eq!(f.arity(), u.dim());
    let rows = parallel_map(levels.to_vec(), |level| {
        scan_level(f, alpha, u, level, samples_per_level, prec, seed)
    });
    rows.into_iter().collect()
}

fn scan_level(
    f: &dyn MapKd,
    alpha: &MultiIndex,
    u: &BallDomain,
    level: i64,
    samples: usize,
    prec: i64,
    seed: u64,
) -> Result<ScanRow> {
    let mut sampler = Sampler::new(u.field(), prec, seed.wrapping_add(level as u64));
    let mut max_log_abs: Option<i64> = None;
    let mut used = 0usize;
    let mut consider = |value: Result<Vec<LaurentSeries>>| -> Result<()> {
        let value = match value {
            Ok(v) => v,
            // a probe too close to the precision horizon is skipped, not fatal
            Err(e) if e.is_precision() => return Ok(()),
            Err(e) => return Err(e),
        };
        used += 1;
        for comp in &value {
            if let Some(v) = comp.valuation() {
                let log_abs = -v;
                max_log_abs = Some(max_log_abs.map_or(log_abs, |m| m.max(log_abs)));
            }
        }
        Ok(())
    };

    for _ in 0..samples {
        match graded_point(&mut sampler, u, alpha, level, prec) {
            Some(x) => consider(divided_difference(f, &x))?,
            None => continue,
        }
    }
    if let Some(x) = pinned_point(u, alpha, level, prec) {
        consider(divided_difference(f, &x))?;
    }
    Ok(ScanRow {
        level,
        max_log_abs,
        samples: used,
    })
}

/// Strict tuple with within-block difference valuations drawn from
/// [r_i, level].
fn graded_point(
    sampler: &mut Sampler,
    u: &BallDomain,
    alpha: &MultiIndex,
    level: i64,
    prec: i64,
) -> Option<BlockPoint> {
    let mut values = Vec::with_capacity(alpha.flat_len());
    for i in 0..u.dim() {
        let lo = u.radius_exp(i).max(0);
        if level < lo || level >= prec {
            return None;
        }
        let mut entry = sampler.in_ball(u.center(i), u.radius_exp(i));
        values.push(entry.clone());
        for _ in 0..alpha.entry(i) {
            let v = sampler.gen_range(lo..=level);
            entry = entry.add(&sampler.unit_with_valuation(v));
            values.push(entry.clone());
        }
    }
    let point = BlockPoint::new(alpha.clone(), values).ok()?;
    point.is_strict().then_some(point)
}

/// The coalescing family: entries c, c + X^n, c + X^n + X^{n+3}, ... with
/// n = level, when it fits inside the ball and the precision window.
fn pinned_point(u: &BallDomain, alpha: &MultiIndex, level: i64, prec: i64) -> Option<BlockPoint> {
    let mut values = Vec::with_capacity(alpha.flat_len());
    for i in 0..u.dim() {
        if level < u.radius_exp(i) || level + 3 * alpha.entry(i) as i64 >= prec {
            return None;
        }
        let mut entry = u.center(i).truncate(prec);
        values.push(entry.clone());
        for j in 0..alpha.entry(i) {
            let exp = level + 3 * j as i64;
            entry = entry.add(&LaurentSeries::monomial(u.field(), 1, exp).truncate(prec));
            values.push(entry.clone());
        }
    }
    let point = BlockPoint::new(alpha.clone(), values).ok()?;
    point.is_strict().then_some(point)
}

/// One row of the blow-up table: |f^{>2<}(0, X^n, X^n + X^{n+3})| = p^{-valuation}.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlowupRow {
    pub n: i64,
    pub valuation: i64,
}

/// Exact second divided differences of the coefficient-spreading map along
/// the coalescing family, for even n up to n_max. The valuation comes out
/// as -n/2, so the absolute values grow by a factor p per step.
pub fn c2_blowup_scan(field: PrimeField, n_max: i64, prec: i64) -> Result<Vec<BlowupRow>> {
    if n_max < 2 || n_max % 2 != 0 {
        return Err(EngineError::Shape(format!(
            "n_max must be a positive even integer, got {n_max}"
        )));
    }
    let needed = super::ceil_div(3 * (n_max + 3), 2) + 4;
    if prec < needed {
        return Err(EngineError::InsufficientPrecision(format!(
            "blow-up scan to n_max = {n_max} needs prec >= {needed}, got {prec}"
        )));
    }
    let f = parse_expr("phi32(x1)", field, 1)?;
    let alpha = MultiIndex::new(vec![2]);
    let mut rows = Vec::new();
    for n in (2..=n_max).step_by(2) {
        let x0 = LaurentSeries::zero(field);
        let x1 = LaurentSeries::monomial(field, 1, n).truncate(prec);
        let x2 = x1.add(&LaurentSeries::monomial(field, 1, n + 3).truncate(prec));
        let x = BlockPoint::new(alpha.clone(), vec![x0, x1, x2])?;
        let value = divided_difference(&f, &x)?;
        let Some(v) = value[0].valuation() else {
            return Err(EngineError::InsufficientPrecision(format!(
                "blow-up value at n = {n} has no certified valuation"
            )));
        };
        rows.push(BlowupRow { n, valuation: v });
    }
    Ok(rows)
}

/// The exact law the table must satisfy: valuation -n/2 at every even n,
/// hence strictly increasing absolute values.
pub fn blowup_law_holds(rows: &[BlowupRow]) -> bool {
    !rows.is_empty()
        && rows.iter().all(|r| r.valuation == -r.n / 2)
        && rows.windows(2).all(|w| w[1].valuation < w[0].valuation)
}

pub fn blowup_probe(field: PrimeField, n_max: i64, prec: i64) -> Result<ProbeReport> {
    let rows = c2_blowup_scan(field, n_max, prec)?;
    let p = field.modulus();
    let verdict = if blowup_law_holds(&rows) {
        "second divided differences unbounded near 0: not C^2_SDS, hence not C^2_BGN by the equivalence of the calculi".to_string()
    } else {
        "blow-up law violated".to_string()
    };
    Ok(ProbeReport {
        check: "c2".into(),
        params: json!({ "field_p": p, "prec": prec, "n_max": n_max }),
        rows: rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "valuation": r.valuation,
                    "abs": format!("{p}^{}", -r.valuation),
                })
            })
            .collect(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn blowup_scan_matches_hand_computation() {
        let rows = c2_blowup_scan(f2(), 8, 64).unwrap();
        let expect: Vec<(i64, i64)> = vec![(2, -1), (4, -2), (6, -3), (8, -4)];
        assert_eq!(
            rows.iter().map(|r| (r.n, r.valuation)).collect::<Vec<_>>(),
            expect
        );
        assert!(blowup_law_holds(&rows));
    }

    #[test]
    fn blowup_scan_guards_precision() {
        let err = c2_blowup_scan(f2(), 20, 16).unwrap_err();
        assert!(matches!(err, EngineError::InsufficientPrecision(_)));
    }

    #[test]
    fn quadratic_scan_is_flat() {
        let f = parse_expr("x1^2", f2(), 1).unwrap();
        let u = BallDomain::unit_ball(f2(), 1);
        let alpha = MultiIndex::new(vec![2]);
        let rows = dd_boundedness_scan(&f, &alpha, &u, &[0, 2, 4, 6, 8], 30, 32, 9).unwrap();
        for r in &rows {
            assert_eq!(r.max_log_abs, Some(0), "level {}", r.level);
        }
    }

    #[test]
    fn linear_scan_vanishes() {
        let f = parse_expr("x1", f2(), 1).unwrap();
        let u = BallDomain::unit_ball(f2(), 1);
        let alpha = MultiIndex::new(vec![2]);
        let rows = dd_boundedness_scan(&f, &alpha, &u, &[0, 4], 20, 32, 9).unwrap();
        for r in &rows {
            assert_eq!(r.max_log_abs, None, "level {}", r.level);
        }
    }

    #[test]
    fn spreading_map_scan_grows() {
        let f = parse_expr("phi32(x1)", f2(), 1).unwrap();
        let u = BallDomain::unit_ball(f2(), 1);
        let alpha = MultiIndex::new(vec![2]);
        let rows = dd_boundedness_scan(&f, &alpha, &u, &[2, 6, 10, 14], 40, 64, 9).unwrap();
        let values: Vec<i64> = rows.iter().map(|r| r.max_log_abs.unwrap()).collect();
        // pinned family guarantees at least n/2 at each level
        for (r, v) in rows.iter().zip(&values) {
            assert!(*v >= r.level / 2, "level {}: {v}", r.level);
        }
        assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
    }
}
