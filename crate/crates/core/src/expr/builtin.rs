//! The coefficient-spreading map behind the `phi32` builtin.

use crate::error::{EngineError, Result};
use crate::field::{LaurentSeries, Prec};

/// Relocates coefficient `a_k` (k >= 0) to exponent `floor(3k/2)`; exponents
/// not of that form stay zero. Defined on the unit ball O only.
///
/// Precision: the first output exponent an unknown input coefficient could
/// reach is `floor(3*prec/2)`, so the output is known strictly below that.
/// The map is additive but not K-homogeneous, and satisfies
/// `v(out) = floor(3*v(in)/2)` — the engine of the C^2 counterexample.
pub fn gauss_expand(x: &LaurentSeries) -> Result<LaurentSeries> {
    if let Some((e, _)) = x.terms().next() {
        if e < 0 {
            return Err(EngineError::DomainViolation(format!(
                "phi32 argument has a known coefficient at exponent {e} < 0 (outside O)"
            )));
        }
    }
    let prec = match x.prec() {
        Prec::Exact => Prec::Exact,
        Prec::Finite(n) => {
            if n < 0 {
                // membership in O cannot be certified from a window below 0
                return Err(EngineError::UndecidableAtPrecision(format!(
                    "phi32 argument only known to O(X^{n}); sign of tail exponents unknown"
                )));
            }
            Prec::Finite(3 * n / 2)
        }
    };
    let terms: Vec<(i64, i64)> = x
        .terms()
        .map(|(e, c)| (3 * e / 2, c.value() as i64))
        .collect();
    Ok(LaurentSeries::from_terms(x.field(), &terms, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_series, PrimeField};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn s(text: &str) -> LaurentSeries {
        parse_series(text, f2(), 64).unwrap()
    }

    #[test]
    fn relocates_single_coefficient() {
        // floor(3*2/2) = 3
        let y = gauss_expand(&LaurentSeries::monomial(f2(), 1, 2)).unwrap();
        assert_eq!(y, LaurentSeries::monomial(f2(), 1, 3));
    }

    #[test]
    fn spreads_and_rescales_precision() {
        let y = gauss_expand(&s("1 + X + O(X^8)")).unwrap();
        assert_eq!(y.to_string(), "1 + X + O(X^12)");
        let z = gauss_expand(&s("X^2 + X^5 + O(X^8)")).unwrap();
        assert_eq!(z.to_string(), "X^3 + X^7 + O(X^12)");
    }

    #[test]
    fn rejects_laurent_tails() {
        let err = gauss_expand(&s("X^-2 + 1 + O(X^4)")).unwrap_err();
        assert!(matches!(err, EngineError::DomainViolation(_)));
    }

    #[test]
    fn zero_passes_through_with_adjusted_precision() {
        let y = gauss_expand(&s("0 + O(X^8)")).unwrap();
        assert!(y.is_zero_to_prec());
        assert_eq!(y.prec(), Prec::Finite(12));
        let z = gauss_expand(&LaurentSeries::zero(f2())).unwrap();
        assert!(z.is_exactly_zero());
    }

    #[test]
    fn odd_precision_floors_soundly() {
        // unknown input coefficient at exponent 7 could land at floor(21/2) = 10
        let y = gauss_expand(&s("1 + O(X^7)")).unwrap();
        assert_eq!(y.prec(), Prec::Finite(10));
    }

    #[test]
    fn additive_homomorphism() {
        let a = s("X^2 + O(X^40)");
        let b = s("X^5 + O(X^40)");
        let lhs = gauss_expand(&a.add(&b)).unwrap();
        let rhs = gauss_expand(&a).unwrap().add(&gauss_expand(&b).unwrap());
        assert!(lhs.agrees_with(&rhs));
        // with a carrying collision: (X^2 + X^2) = 0 in char 2
        let lhs2 = gauss_expand(&a.add(&a)).unwrap();
        assert!(lhs2.is_zero_to_prec());
    }

    #[test]
    fn valuation_law() {
        for v in 0..20 {
            let x = LaurentSeries::from_terms(f2(), &[(v, 1), (v + 1, 1)], Prec::Finite(40));
            let y = gauss_expand(&x).unwrap();
            assert_eq!(y.valuation(), Some(3 * v / 2), "v = {v}");
        }
    }

    #[test]
    fn not_homogeneous_over_k() {
        // t = X, x = X: phi32(X^2) = X^3 but X*phi32(X) = X^2
        let t = LaurentSeries::monomial(f2(), 1, 1);
        let x = LaurentSeries::monomial(f2(), 1, 1);
        let lhs = gauss_expand(&t.mul(&x)).unwrap();
        let rhs = t.mul(&gauss_expand(&x).unwrap());
        assert_eq!(lhs, LaurentSeries::monomial(f2(), 1, 3));
        assert_eq!(rhs, LaurentSeries::monomial(f2(), 1, 2));
        assert!(!lhs.agrees_with(&rhs));
    }
}
