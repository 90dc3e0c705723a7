//! Truncated formal Laurent series over F_p.
//!
//! A series stores the known coefficient window `[lead, prec)`: everything
//! below `lead` is a known zero, everything at or above `prec` is unknown
//! (the `O(X^prec)` tail). `Prec::Exact` marks values with no unknown tail,
//! which arise internally for constants and unit vectors; parsed literals
//! always carry a finite bound.
//!
//! Canonical form: the stored window is trimmed so that its first and last
//! entries are nonzero. A series with no known nonzero coefficient stores an
//! empty window ("zero to precision N", or the exact zero).

use super::fp::{FpElement, PrimeField};
use crate::error::{EngineError, Result};
use std::cmp::Ordering;

/// Precision bound: coefficients at exponents `>= Finite(n)` are unknown.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Prec {
    Finite(i64),
    Exact,
}

impl Prec {
    pub fn min(self, other: Prec) -> Prec {
        match (self, other) {
            (Prec::Exact, q) => q,
            (q, Prec::Exact) => q,
            (Prec::Finite(a), Prec::Finite(b)) => Prec::Finite(a.min(b)),
        }
    }

    /// Shifts a finite bound; `Exact` absorbs shifts.
    pub fn shift(self, delta: i64) -> Prec {
        match self {
            Prec::Finite(n) => Prec::Finite(n + delta),
            Prec::Exact => Prec::Exact,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Prec::Finite(n) => Some(n),
            Prec::Exact => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Prec::Exact)
    }

    /// True when exponent `e` lies in the known region.
    fn covers(self, e: i64) -> bool {
        match self {
            Prec::Finite(n) => e < n,
            Prec::Exact => true,
        }
    }
}

impl PartialOrd for Prec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Prec {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Prec::Exact, Prec::Exact) => Ordering::Equal,
            (Prec::Exact, Prec::Finite(_)) => Ordering::Greater,
            (Prec::Finite(_), Prec::Exact) => Ordering::Less,
            (Prec::Finite(a), Prec::Finite(b)) => a.cmp(b),
        }
    }
}

/// Ultrametric absolute value `|x| = p^{-v}`, kept as the integer `v`.
///
/// `ZeroToPrec(n)` is the bound `|x| <= p^{-n}` left by a window with no
/// known nonzero coefficient; `Zero` is the exact zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AbsValue {
    Finite(i64),
    ZeroToPrec(i64),
    Zero,
}

impl AbsValue {
    /// Exact valuation, if decidable.
    pub fn valuation(self) -> Option<i64> {
        match self {
            AbsValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Compares magnitudes. Errs when the available precision cannot decide,
    /// e.g. an exact value against a smaller-or-equal zero bound.
    pub fn try_cmp(self, other: AbsValue) -> Result<Ordering> {
        use AbsValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(b.cmp(&a)),
            (Zero, Zero) => Ok(Ordering::Equal),
            (Zero, Finite(_)) => Ok(Ordering::Less),
            (Finite(_), Zero) => Ok(Ordering::Greater),
            (ZeroToPrec(n), Finite(v)) if v < n => Ok(Ordering::Less),
            (Finite(v), ZeroToPrec(n)) if v < n => Ok(Ordering::Greater),
            _ => Err(EngineError::UndecidableAtPrecision(format!(
                "cannot order {self:?} against {other:?}"
            ))),
        }
    }
}

/// Element of K = F_p((X)), known on the window `[lead, prec)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    field: PrimeField,
    lead: i64,
    coeffs: Vec<FpElement>,
    prec: Prec,
}

impl LaurentSeries {
    /// Canonicalizing constructor: trims zero margins, truncates at `prec`.
    pub fn from_window(
        field: PrimeField,
        mut lead: i64,
        mut coeffs: Vec<FpElement>,
        prec: Prec,
    ) -> Self {
        if let Prec::Finite(n) = prec {
            let keep = (n - lead).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        let nz_first = coeffs.iter().position(|c| !c.is_zero());
        match nz_first {
            None => Self::zero_shape(field, prec),
            Some(k) => {
                lead += k as i64;
                coeffs.drain(..k);
                let nz_last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                coeffs.truncate(nz_last + 1);
                LaurentSeries {
                    field,
                    lead,
                    coeffs,
                    prec,
                }
            }
        }
    }

    fn zero_shape(field: PrimeField, prec: Prec) -> Self {
        let lead = match prec {
            Prec::Finite(n) => n,
            Prec::Exact => 0,
        };
        LaurentSeries {
            field,
            lead,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// The exact zero of K.
    pub fn zero(field: PrimeField) -> Self {
        Self::zero_shape(field, Prec::Exact)
    }

    /// "Zero to precision n": all coefficients below `n` known to vanish.
    pub fn zero_to_prec(field: PrimeField, n: i64) -> Self {
        Self::zero_shape(field, Prec::Finite(n))
    }

    /// The exact constant `c` (embedded residue).
    pub fn constant(field: PrimeField, c: i64) -> Self {
        Self::from_window(field, 0, vec![field.elem_signed(c)], Prec::Exact)
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    /// The exact monomial `c * X^exp`.
    pub fn monomial(field: PrimeField, c: i64, exp: i64) -> Self {
        Self::from_window(field, exp, vec![field.elem_signed(c)], Prec::Exact)
    }

    /// Builds from sparse `(exponent, coefficient)` terms; repeated exponents
    /// accumulate.
    pub fn from_terms(field: PrimeField, terms: &[(i64, i64)], prec: Prec) -> Self {
        if terms.is_empty() {
            return Self::zero_shape(field, prec);
        }
        let lo = terms.iter().map(|&(e, _)| e).min().unwrap();
        let hi = terms.iter().map(|&(e, _)| e).max().unwrap();
        let mut coeffs = vec![field.zero(); (hi - lo + 1) as usize];
        for &(e, c) in terms {
            let idx = (e - lo) as usize;
            coeffs[idx] = field.add(coeffs[idx], field.elem_signed(c));
        }
        Self::from_window(field, lo, coeffs, prec)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Exponent of the first known nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lead)
        }
    }

    /// `|x|` as an exact object: valuation, zero bound, or exact zero.
    pub fn abs_value(&self) -> AbsValue {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => AbsValue::Finite(self.lead),
            (true, Prec::Finite(n)) => AbsValue::ZeroToPrec(n),
            (true, Prec::Exact) => AbsValue::Zero,
        }
    }

    /// No known nonzero coefficient (exact zero or zero-to-precision).
    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_exact()
    }

    /// Known terms, ascending by exponent, zeros omitted.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FpElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.lead + k as i64, c))
    }

    /// Coefficient at exponent `e`; `None` when `e` lies in the unknown tail.
    pub fn coeff_at(&self, e: i64) -> Option<FpElement> {
        if !self.prec.covers(e) {
            return None;
        }
        Some(self.known_coeff(e))
    }

    /// Coefficient at a known exponent (zero outside the stored window).
    fn known_coeff(&self, e: i64) -> FpElement {
        debug_assert!(self.prec.covers(e));
        if e < self.lead || e >= self.lead + self.coeffs.len() as i64 {
            self.field.zero()
        } else {
            self.coeffs[(e - self.lead) as usize]
        }
    }

    /// Valuation lower bound used by precision propagation: the valuation
    /// itself when decidable, otherwise the zero bound.
    fn val_bound(&self) -> AbsValue {
        self.abs_value()
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field, other.field,
            "mixed coefficient fields in series arithmetic"
        );
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        LaurentSeries {
            field: self.field,
            lead: self.lead,
            coeffs,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Self::zero_shape(self.field, prec);
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (false, false) => self.lead.min(other.lead),
            (false, true) => self.lead,
            (true, false) => other.lead,
            (true, true) => unreachable!(),
        };
        let hi = match prec {
            Prec::Finite(n) => n,
            Prec::Exact => (self.lead + self.coeffs.len() as i64)
                .max(other.lead + other.coeffs.len() as i64),
        };
        if lo >= hi {
            return Self::zero_shape(self.field, prec);
        }
        let coeffs = (lo..hi)
            .map(|e| self.field.add(self.known_coeff(e), other.known_coeff(e)))
            .collect();
        Self::from_window(self.field, lo, coeffs, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies a coefficient through.
    pub fn scale(&self, c: FpElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        // c is a unit, so canonical margins are preserved.
        LaurentSeries {
            field: self.field,
            lead: self.lead,
            coeffs,
            prec: self.prec,
        }
    }

    /// Product with precision `min(prec_x + v_y, prec_y + v_x)`, reading the
    /// zero bound as the valuation of a zero-to-precision operand.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Self::zero(self.field);
        }
        let (va, vb) = match (self.val_bound(), other.val_bound()) {
            (AbsValue::Finite(a) | AbsValue::ZeroToPrec(a), AbsValue::Finite(b) | AbsValue::ZeroToPrec(b)) => (a, b),
            _ => unreachable!("exact zeros handled above"),
        };
        let prec = self.prec.shift(vb).min(other.prec.shift(va));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            match prec {
                Prec::Finite(n) => return Self::zero_to_prec(self.field, n),
                Prec::Exact => unreachable!("zero-to-precision operand has finite bound"),
            }
        }
        let lead = self.lead + other.lead;
        let len = match prec {
            Prec::Finite(n) => {
                if n <= lead {
                    return Self::zero_to_prec(self.field, n);
                }
                ((n - lead) as usize).min(self.coeffs.len() + other.coeffs.len() - 1)
            }
            Prec::Exact => self.coeffs.len() + other.coeffs.len() - 1,
        };
        let mut coeffs = vec![self.field.zero(); len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            let jmax = (len - i).min(other.coeffs.len());
            for (j, &b) in other.coeffs.iter().enumerate().take(jmax) {
                coeffs[i + j] = self.field.add(coeffs[i + j], self.field.mul(a, b));
            }
        }
        Self::from_window(self.field, lead, coeffs, prec)
    }

    /// Reciprocal by leading-term factorization plus power-series expansion.
    /// Relative precision is preserved: the result is known to `prec - 2v`.
    pub fn inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return match self.prec {
                Prec::Exact => Err(EngineError::DivisionByExactZero),
                Prec::Finite(n) => Err(EngineError::ZeroDivisorToPrecision { prec: n }),
            };
        }
        let v = self.lead;
        let f = self.field;
        match self.prec {
            Prec::Exact => {
                if self.coeffs.len() == 1 {
                    let c = f.inv(self.coeffs[0]);
                    Ok(LaurentSeries {
                        field: f,
                        lead: -v,
                        coeffs: vec![c],
                        prec: Prec::Exact,
                    })
                } else {
                    Err(EngineError::ExactInverse)
                }
            }
            Prec::Finite(n) => {
                let m = (n - v) as usize; // relative coefficients known
                let u0_inv = f.inv(self.coeffs[0]);
                let mut b = vec![f.zero(); m];
                b[0] = u0_inv;
                for k in 1..m {
                    let mut acc = f.zero();
                    let imax = k.min(self.coeffs.len() - 1);
                    for i in 1..=imax {
                        acc = f.add(acc, f.mul(self.coeffs[i], b[k - i]));
                    }
                    b[k] = f.neg(f.mul(u0_inv, acc));
                }
                Ok(Self::from_window(f, -v, b, Prec::Finite(n - 2 * v)))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Non-negative integer power; `x^0 = 1` exactly.
    pub fn int_pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Forgets coefficients at exponents `>= n`. Never gains precision.
    pub fn truncate(&self, n: i64) -> Self {
        let prec = self.prec.min(Prec::Finite(n));
        Self::from_window(self.field, self.lead, self.coeffs.clone(), prec)
    }

    /// Equality at the joint precision: the difference has no known nonzero
    /// coefficient. This is the only equality truncated arithmetic can offer.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero_to_prec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn poly2(terms: &[(i64, i64)], prec: i64) -> LaurentSeries {
        LaurentSeries::from_terms(f2(), terms, Prec::Finite(prec))
    }

    #[test]
    fn valuation_of_first_known_nonzero() {
        // x = X^3 + X^5 + O(X^10): v = 3
        let x = poly2(&[(3, 1), (5, 1)], 10);
        assert_eq!(x.abs_value(), AbsValue::Finite(3));
        // x = 0 + O(X^16): zero bound
        let z = LaurentSeries::zero_to_prec(f2(), 16);
        assert_eq!(z.abs_value(), AbsValue::ZeroToPrec(16));
        // x = X^-2 + 1 + O(X^4): Laurent tail, v = -2
        let t = poly2(&[(-2, 1), (0, 1)], 4);
        assert_eq!(t.abs_value(), AbsValue::Finite(-2));
    }

    #[test]
    fn char_two_square() {
        let x = poly2(&[(0, 1), (1, 1)], 64);
        let sq = x.mul(&x);
        assert_eq!(sq.terms().collect::<Vec<_>>().len(), 2);
        assert_eq!(sq.coeff_at(0).unwrap().value(), 1);
        assert_eq!(sq.coeff_at(1).unwrap().value(), 0);
        assert_eq!(sq.coeff_at(2).unwrap().value(), 1);
    }

    #[test]
    fn mul_shifts_exponent_and_precision() {
        // (X^-1) * (X + X^2 + O(X^5)) = 1 + X + O(X^4)
        let a = LaurentSeries::monomial(f2(), 1, -1);
        let b = poly2(&[(1, 1), (2, 1)], 5);
        let prod = a.mul(&b);
        assert_eq!(prod.prec(), Prec::Finite(4));
        assert_eq!(prod.valuation(), Some(0));
        assert_eq!(prod.coeff_at(1).unwrap().value(), 1);
        assert_eq!(prod.coeff_at(2).unwrap().value(), 0);
    }

    #[test]
    fn hand_multiplication_for_blowup_denominator() {
        // (1 + X + X^2)(1 + X) = 1 + X^3 over F_2
        let a = poly2(&[(0, 1), (1, 1), (2, 1)], 64);
        let b = poly2(&[(0, 1), (1, 1)], 64);
        let prod = a.mul(&b);
        let terms: Vec<_> = prod.terms().map(|(e, c)| (e, c.value())).collect();
        assert_eq!(terms, vec![(0, 1), (3, 1)]);
    }

    #[test]
    fn geometric_series_inverse() {
        // 1/(1+X) at prec 6 = 1 + X + X^2 + X^3 + X^4 + X^5 + O(X^6)
        let x = poly2(&[(0, 1), (1, 1)], 6);
        let y = x.inv().unwrap();
        assert_eq!(y.prec(), Prec::Finite(6));
        for e in 0..6 {
            assert_eq!(y.coeff_at(e).unwrap().value(), 1, "coeff at {e}");
        }
        assert!(x.mul(&y).agrees_with(&LaurentSeries::one(f2())));
    }

    #[test]
    fn inverse_of_three_term_unit() {
        // 1/(1+X+X^2) = 1 + X + X^3 + X^4 + O(X^6); verify by multiplying back
        let x = poly2(&[(0, 1), (1, 1), (2, 1)], 6);
        let y = x.inv().unwrap();
        let expect = poly2(&[(0, 1), (1, 1), (3, 1), (4, 1)], 6);
        assert_eq!(y, expect);
        let back = x.mul(&y);
        assert!(back.agrees_with(&LaurentSeries::one(f2())));
        assert_eq!(back.prec(), Prec::Finite(6));
    }

    #[test]
    fn inverse_of_zero_to_precision_fails() {
        let z = LaurentSeries::zero_to_prec(f2(), 8);
        assert_eq!(
            z.inv(),
            Err(EngineError::ZeroDivisorToPrecision { prec: 8 })
        );
        assert_eq!(
            LaurentSeries::zero(f2()).inv(),
            Err(EngineError::DivisionByExactZero)
        );
    }

    #[test]
    fn inverse_preserves_relative_precision() {
        // v = 2, prec = 7: five known coefficients; inverse known to 7 - 4 = 3
        let x = poly2(&[(2, 1), (3, 1)], 7);
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(-2));
        assert_eq!(y.prec(), Prec::Finite(3));
    }

    #[test]
    fn exact_monomial_inverse_is_exact() {
        let x = LaurentSeries::monomial(f2(), 1, 5);
        let y = x.inv().unwrap();
        assert!(y.prec().is_exact());
        assert_eq!(y.valuation(), Some(-5));
        let nonmono = LaurentSeries::from_terms(f2(), &[(0, 1), (1, 1)], Prec::Exact);
        assert_eq!(nonmono.inv(), Err(EngineError::ExactInverse));
    }

    #[test]
    fn abs_value_ordering() {
        use std::cmp::Ordering::*;
        let a = AbsValue::Finite(3);
        let b = AbsValue::Finite(5);
        assert_eq!(a.try_cmp(b), Ok(Greater)); // p^-3 > p^-5
        assert_eq!(AbsValue::ZeroToPrec(16).try_cmp(a), Ok(Less));
        assert!(AbsValue::ZeroToPrec(2).try_cmp(a).is_err());
        assert!(AbsValue::ZeroToPrec(4).try_cmp(AbsValue::Zero).is_err());
        assert_eq!(AbsValue::Zero.try_cmp(b), Ok(Less));
    }

    #[test]
    fn addition_cancels_and_tracks_precision() {
        let a = poly2(&[(0, 1), (2, 1)], 10);
        let b = poly2(&[(0, 1)], 6);
        let s = a.add(&b);
        assert_eq!(s.prec(), Prec::Finite(6));
        assert_eq!(s.valuation(), Some(2));
        let cancel = a.sub(&a);
        assert!(cancel.is_zero_to_prec());
        assert_eq!(cancel.prec(), Prec::Finite(10));
    }
}
