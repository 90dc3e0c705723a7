//! Prime field arithmetic on integer residues.

use crate::error::{EngineError, Result};
use std::fmt;

/// The coefficient field F_p, identified by its (validated) prime modulus.
///
/// Copy-cheap; every series carries one so that arithmetic is self-contained.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u64,
}

/// A residue in `[0, p)`. The modulus lives in the enclosing [`PrimeField`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FpElement {
    value: u64,
}

impl FpElement {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Residue products stay below 2^62, so u64 multiplication cannot overflow.
const MAX_MODULUS: u64 = 1 << 31;

impl PrimeField {
    /// Validates by deterministic trial division; rejects p < 2, composite p,
    /// and p >= 2^31.
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(EngineError::InvalidModulus { p });
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn zero(self) -> FpElement {
        FpElement { value: 0 }
    }

    pub fn one(self) -> FpElement {
        FpElement { value: 1 % self.p }
    }

    /// Embeds an unsigned integer by reduction mod p.
    pub fn elem(self, n: u64) -> FpElement {
        FpElement { value: n % self.p }
    }

    /// Embeds a signed integer by reduction mod p.
    pub fn elem_signed(self, n: i64) -> FpElement {
        let r = n.rem_euclid(self.p as i64) as u64;
        FpElement { value: r }
    }

    pub fn add(self, a: FpElement, b: FpElement) -> FpElement {
        let mut v = a.value + b.value;
        if v >= self.p {
            v -= self.p;
        }
        FpElement { value: v }
    }

    pub fn sub(self, a: FpElement, b: FpElement) -> FpElement {
        self.add(a, self.neg(b))
    }

    pub fn neg(self, a: FpElement) -> FpElement {
        if a.value == 0 {
            a
        } else {
            FpElement {
                value: self.p - a.value,
            }
        }
    }

    pub fn mul(self, a: FpElement, b: FpElement) -> FpElement {
        FpElement {
            value: (a.value * b.value) % self.p,
        }
    }

    /// Multiplicative inverse by Fermat's little theorem.
    ///
    /// Panics on zero; callers certify nonzero denominators first.
    pub fn inv(self, a: FpElement) -> FpElement {
        assert!(!a.is_zero(), "inverse of zero residue");
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, a: FpElement, mut e: u64) -> FpElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_small_primes() {
        for p in [2u64, 3, 5, 7, 101, 65537] {
            assert!(PrimeField::new(p).is_ok(), "p = {p}");
        }
    }

    #[test]
    fn rejects_composites_and_units() {
        for p in [0u64, 1, 4, 9, 91, 1 << 32] {
            assert_eq!(
                PrimeField::new(p),
                Err(EngineError::InvalidModulus { p }),
                "p = {p}"
            );
        }
    }

    #[test]
    fn field_axioms_spot_checks() {
        let f = PrimeField::new(7).unwrap();
        let a = f.elem(3);
        let b = f.elem(5);
        assert_eq!(f.add(a, b).value(), 1);
        assert_eq!(f.sub(a, b).value(), 5);
        assert_eq!(f.mul(a, b).value(), 1);
        assert_eq!(f.inv(a).value(), 5);
        assert_eq!(f.mul(a, f.inv(a)), f.one());
        assert_eq!(f.elem_signed(-1).value(), 6);
    }
}
