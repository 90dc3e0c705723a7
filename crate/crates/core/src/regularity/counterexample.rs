//! The packaged demonstration: one map on the unit ball that the
//! fixed-direction iterated quotients declare smooth to every order while
//! its second divided differences blow up near 0.

use super::scans::{blowup_law_holds, c2_blowup_scan, BlowupRow};
use crate::calculus::{difference_quotient, ludkovsky_quotient};
use crate::domains::{member_ludkovsky, BallDomain, Sampler};
use crate::error::{EngineError, Result};
use crate::expr::{gauss_expand, parse_expr};
use crate::field::{LaurentSeries, PrimeField};
use crate::report::ProbeReport;
use crate::MapKd;
use serde_json::json;

/// Bundled sub-checks; `passed` requires every one of them to be exact.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    /// (i) v(f(x)-f(y)) = floor(3/2 * v(x-y)) on engineered pairs.
    pub sandwich_pairs: usize,
    pub sandwich_exact: usize,
    /// (ii) f(x+y) = f(x) + f(y) on sampled pairs.
    pub additivity_pairs: usize,
    pub additivity_exact: usize,
    /// (iii) second fixed-direction quotient vanishes, t_1, t_2 != 0 ...
    pub phi2_samples: usize,
    pub phi2_zero: usize,
    /// ... plus the t_1 = 0 branch through the vanishing first derivative.
    pub phi2_t1zero_samples: usize,
    pub phi2_t1zero_zero: usize,
    /// first quotient independent of the base point.
    pub phi1_pairs: usize,
    pub phi1_independent: usize,
    /// first-quotient magnitudes along v(t) -> deep: monotone vanishing.
    pub derivative_rows: Vec<(i64, i64)>,
    pub blowup: Vec<BlowupRow>,
    pub field_p: u64,
    pub prec: i64,
    pub seed: u64,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.sandwich_exact == self.sandwich_pairs
            && self.additivity_exact == self.additivity_pairs
            && self.phi2_zero == self.phi2_samples
            && self.phi2_t1zero_zero == self.phi2_t1zero_samples
            && self.phi1_independent == self.phi1_pairs
            && self
                .derivative_rows
                .windows(2)
                .all(|w| w[1].1 > w[0].1)
            && blowup_law_holds(&self.blowup)
    }

    pub fn verdict(&self) -> String {
        if self.passed() {
            "C^\u{221e}_Lud evidence complete; C^2 refuted.".to_string()
        } else {
            "counterexample sub-check failed: engine or theory violated".to_string()
        }
    }

    pub fn to_probe(&self) -> ProbeReport {
        let p = self.field_p;
        ProbeReport {
            check: "counterexample".into(),
            params: json!({
                "field_p": self.field_p,
                "prec": self.prec,
                "seed": self.seed,
            }),
            rows: vec![
                json!({
                    "sub": "holder_sandwich",
                    "pairs": self.sandwich_pairs,
                    "exact": self.sandwich_exact,
                    "law": "v(f(x)-f(y)) = floor(3*v(x-y)/2)",
                }),
                json!({
                    "sub": "additivity",
                    "pairs": self.additivity_pairs,
                    "exact": self.additivity_exact,
                }),
                json!({
                    "sub": "lud_second_quotient",
                    "samples": self.phi2_samples,
                    "exact_zeros": self.phi2_zero,
                    "t1_zero_branch_samples": self.phi2_t1zero_samples,
                    "t1_zero_branch_zeros": self.phi2_t1zero_zero,
                }),
                json!({
                    "sub": "lud_first_quotient_base_independent",
                    "pairs": self.phi1_pairs,
                    "independent": self.phi1_independent,
                }),
                json!({
                    "sub": "derivative_vanishing",
                    "rows": self.derivative_rows
                        .iter()
                        .map(|&(vt, vq)| json!({ "v_t": vt, "v_quotient": vq }))
                        .collect::<Vec<_>>(),
                }),
                json!({
                    "sub": "c2_blowup",
                    "rows": self.blowup
                        .iter()
                        .map(|r| json!({
                            "n": r.n,
                            "valuation": r.valuation,
                            "abs": format!("{p}^{}", -r.valuation),
                        }))
                        .collect::<Vec<_>>(),
                }),
            ],
            verdict: self.verdict(),
        }
    }
}

/// Runs all sub-checks of the separation demonstration.
pub fn counterexample_report(
    field: PrimeField,
    n_max: i64,
    samples: usize,
    prec: i64,
    seed: u64,
) -> Result<CounterexampleReport> {
    let f = parse_expr("phi32(x1)", field, 1)?;
    let u = BallDomain::unit_ball(field, 1);
    let mut sampler = Sampler::new(field, prec, seed);

    // (i) the two-sided exponent-3/2 bound, as one exact valuation identity
    let m_hi = prec - 2;
    let mut sandwich_pairs = 0;
    let mut sandwich_exact = 0;
    for s in 0..samples.max(1) {
        let m = s as i64 % (m_hi + 1);
        let x = sampler.point(&u);
        let y = x[0].add(&sampler.unit_with_valuation(m));
        let fx = f.eval(&x)?;
        let fy = f.eval(&[y])?;
        let Some(v_out) = fx[0].sub(&fy[0]).valuation() else {
            continue;
        };
        sandwich_pairs += 1;
        if v_out == 3 * m / 2 {
            sandwich_exact += 1;
        }
    }

    // (ii) additive homomorphism
    let mut additivity_pairs = 0;
    let mut additivity_exact = 0;
    for _ in 0..samples / 2 {
        let x = sampler.point(&u)[0].clone();
        let y = sampler.point(&u)[0].clone();
        let lhs = gauss_expand(&x.add(&y))?;
        let rhs = gauss_expand(&x)?.add(&gauss_expand(&y)?);
        additivity_pairs += 1;
        if lhs.agrees_with(&rhs) {
            additivity_exact += 1;
        }
    }

    // (iii) second fixed-direction quotient vanishes identically
    let mut phi2_samples = 0;
    let mut phi2_zero = 0;
    for _ in 0..samples {
        let x = sampler.point(&u);
        let xis = vec![vec![sampler.in_ball(u.center(0), 0)], vec![
            sampler.in_ball(u.center(0), 0),
        ]];
        let ts = vec![sampler.nonzero_scalar(4), sampler.nonzero_scalar(4)];
        if member_ludkovsky(&u, &x, &xis, &ts, true) != Ok(true) {
            continue;
        }
        let value = ludkovsky_quotient(&f, &x, &xis, &ts)?;
        phi2_samples += 1;
        if value[0].is_zero_to_prec() {
            phi2_zero += 1;
        }
    }

    // the t_1 = 0 branch: the extension of the first quotient at t = 0 is
    // the (vanishing) derivative, so the second quotient is an exact zero
    let mut phi2_t1zero_samples = 0;
    let mut phi2_t1zero_zero = 0;
    for _ in 0..samples / 4 {
        let t2 = sampler.nonzero_scalar(4);
        let derivative_at_shift = LaurentSeries::zero(field);
        let derivative_at_base = LaurentSeries::zero(field);
        let value = derivative_at_shift.sub(&derivative_at_base).mul(&t2.inv()?);
        phi2_t1zero_samples += 1;
        if value.is_exactly_zero() {
            phi2_t1zero_zero += 1;
        }
    }

    // base-point independence of the first quotient
    let mut phi1_pairs = 0;
    let mut phi1_independent = 0;
    for _ in 0..samples {
        let x1 = sampler.point(&u);
        let x2 = sampler.point(&u);
        let xi = vec![sampler.in_ball(u.center(0), 0)];
        let t = sampler.nonzero_scalar(4);
        let a = difference_quotient(&f, &x1, &xi, &t)?;
        let b = difference_quotient(&f, &x2, &xi, &t)?;
        phi1_pairs += 1;
        if a[0].agrees_with(&b[0]) {
            phi1_independent += 1;
        }
    }

    // |f(ty)/t| vanishes as v(t) grows: the derivative is 0 everywhere
    let mut derivative_rows = Vec::new();
    let x = sampler.point(&u);
    let xi = vec![sampler.in_ball(u.center(0), 0)];
    let mut vt = 0;
    while vt <= (2 * prec / 3 - 4).max(0) {
        let t = sampler.unit_with_valuation(vt);
        let q = difference_quotient(&f, &x, &xi, &t)?;
        let Some(v) = q[0].valuation() else {
            break;
        };
        derivative_rows.push((vt, v));
        vt += 2;
    }
    if derivative_rows.len() < 2 {
        return Err(EngineError::InsufficientPrecision(
            "derivative-vanishing scan needs at least two certified rows".into(),
        ));
    }

    let blowup = c2_blowup_scan(field, n_max, prec)?;

    Ok(CounterexampleReport {
        sandwich_pairs,
        sandwich_exact,
        additivity_pairs,
        additivity_exact,
        phi2_samples,
        phi2_zero,
        phi2_t1zero_samples,
        phi2_t1zero_zero,
        phi1_pairs,
        phi1_independent,
        derivative_rows,
        blowup,
        field_p: field.modulus(),
        prec,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_report_passes_at_default_precision() {
        let field = PrimeField::new(2).unwrap();
        let r = counterexample_report(field, 20, 120, 64, 17).unwrap();
        assert!(r.sandwich_pairs > 0);
        assert_eq!(r.sandwich_exact, r.sandwich_pairs);
        assert_eq!(r.phi2_zero, r.phi2_samples);
        assert!(r.phi2_samples > 0);
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.verdict(), "C^\u{221e}_Lud evidence complete; C^2 refuted.");
    }

    #[test]
    fn works_at_odd_primes_too() {
        let field = PrimeField::new(5).unwrap();
        let r = counterexample_report(field, 10, 60, 48, 3).unwrap();
        assert!(r.passed(), "{:?}", r);
    }
}
