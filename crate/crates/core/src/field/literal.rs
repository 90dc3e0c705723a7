//! Series literal grammar, shared with the expression front-end:
//!
//! ```text
//! series := term {('+'|'-') term} ['+' 'O(X^' int ')']
//! term   := [coeff '*'] 'X' ['^' int] | coeff
//! ```
//!
//! `coeff` ranges over `0..p-1`. Printing reproduces this grammar exactly,
//! so `parse(print(x)) == x` for every finite-precision series.

use super::fp::PrimeField;
use super::series::{LaurentSeries, Prec};
use crate::error::{EngineError, Result};
use std::fmt;

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (e, c) in self.terms() {
            if wrote {
                write!(f, " + ")?;
            }
            match (c.value(), e) {
                (1, 0) => write!(f, "1")?,
                (1, 1) => write!(f, "X")?,
                (1, e) => write!(f, "X^{e}")?,
                (c, 0) => write!(f, "{c}")?,
                (c, 1) => write!(f, "{c}*X")?,
                (c, e) => write!(f, "{c}*X^{e}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        if let Some(n) = self.prec().finite() {
            write!(f, " + O(X^{n})")?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("'{}'", b as char))),
        }
    }

    fn err(&self, expected: &str) -> EngineError {
        EngineError::Syntax {
            pos: self.pos,
            expected: expected.to_string(),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("integer"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let n: i64 = digits
            .parse()
            .map_err(|_| self.err("integer within range"))?;
        Ok(if neg { -n } else { n })
    }
}

/// One `term` or the trailing `O(X^n)` marker.
enum Piece {
    Term { exp: i64, coeff: i64 },
    Tail { prec: i64 },
}

fn parse_piece(cur: &mut Cursor<'_>, field: PrimeField) -> Result<Piece> {
    match cur.peek() {
        Some(b'O') => {
            cur.pos += 1;
            cur.expect(b'(')?;
            cur.expect(b'X')?;
            cur.expect(b'^')?;
            let n = cur.integer()?;
            cur.expect(b')')?;
            Ok(Piece::Tail { prec: n })
        }
        Some(b'X') => {
            cur.pos += 1;
            let exp = if cur.peek() == Some(b'^') {
                cur.pos += 1;
                cur.integer()?
            } else {
                1
            };
            Ok(Piece::Term { exp, coeff: 1 })
        }
        Some(b) if b.is_ascii_digit() => {
            let at = cur.pos;
            let c = cur.integer()?;
            if c as u64 >= field.modulus() {
                return Err(EngineError::Syntax {
                    pos: at,
                    expected: format!("coefficient in 0..{}", field.modulus() - 1),
                });
            }
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
                cur.expect(b'X')?;
                let exp = if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    cur.integer()?
                } else {
                    1
                };
                Ok(Piece::Term { exp, coeff: c })
            } else {
                Ok(Piece::Term { exp: 0, coeff: c })
            }
        }
        _ => Err(cur.err("term or O(X^n)")),
    }
}

/// Parses a series literal. Literals without an explicit `O(X^n)` tail are
/// taken as known up to the working default precision (widened if a written
/// exponent would otherwise fall outside the window).
pub fn parse_series(text: &str, field: PrimeField, default_prec: i64) -> Result<LaurentSeries> {
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(i64, i64)> = Vec::new();
    let mut tail: Option<i64> = None;
    let mut sign = 1i64;
    loop {
        match parse_piece(&mut cur, field)? {
            Piece::Term { exp, coeff } => terms.push((exp, sign * coeff)),
            Piece::Tail { prec } => {
                if sign < 0 {
                    return Err(cur.err("'+' before O(X^n)"));
                }
                tail = Some(prec);
                break;
            }
        }
        match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                sign = 1;
            }
            Some(b'-') => {
                cur.pos += 1;
                sign = -1;
            }
            None => break,
            Some(_) => return Err(cur.err("'+', '-', or end of input")),
        }
    }
    cur.skip_ws();
    if cur.pos != cur.bytes.len() {
        return Err(cur.err("end of input"));
    }
    let prec = match tail {
        Some(n) => n,
        None => {
            let hi = terms.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
            default_prec.max(hi)
        }
    };
    Ok(LaurentSeries::from_terms(field, &terms, Prec::Finite(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn parses_basic_literals() {
        let x = parse_series("1 + X^2 + O(X^16)", f2(), 64).unwrap();
        assert_eq!(x.prec(), Prec::Finite(16));
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.coeff_at(2).unwrap().value(), 1);
        assert_eq!(x.to_string(), "1 + X^2 + O(X^16)");
    }

    #[test]
    fn default_precision_applies_without_tail() {
        let x = parse_series("X^2", f2(), 64).unwrap();
        assert_eq!(x.prec(), Prec::Finite(64));
        // exponents beyond the default widen the window instead of dropping
        let y = parse_series("X^70", f2(), 64).unwrap();
        assert_eq!(y.valuation(), Some(70));
        assert_eq!(y.prec(), Prec::Finite(71));
    }

    #[test]
    fn laurent_tails_and_coefficients() {
        let f5 = PrimeField::new(5).unwrap();
        let x = parse_series("3*X^-2 + 1 + 4*X + O(X^4)", f5, 64).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(x.coeff_at(-2).unwrap().value(), 3);
        assert_eq!(x.coeff_at(1).unwrap().value(), 4);
        assert_eq!(x.to_string(), "3*X^-2 + 1 + 4*X + O(X^4)");
    }

    #[test]
    fn minus_folds_into_residues() {
        let f3 = PrimeField::new(3).unwrap();
        let x = parse_series("1 - X", f3, 8).unwrap();
        assert_eq!(x.coeff_at(1).unwrap().value(), 2);
        assert_eq!(x.to_string(), "1 + 2*X + O(X^8)");
    }

    #[test]
    fn zero_literals() {
        let z = parse_series("0", f2(), 16).unwrap();
        assert!(z.is_zero_to_prec());
        assert_eq!(z.to_string(), "0 + O(X^16)");
        let z2 = parse_series("0 + O(X^8)", f2(), 64).unwrap();
        assert_eq!(z2.prec(), Prec::Finite(8));
    }

    #[test]
    fn rejects_out_of_range_coefficients_and_garbage() {
        assert!(matches!(
            parse_series("2*X", f2(), 8),
            Err(EngineError::Syntax { .. })
        ));
        assert!(matches!(
            parse_series("X +", f2(), 8),
            Err(EngineError::Syntax { .. })
        ));
        assert!(matches!(
            parse_series("O(X^3) + X", f2(), 8),
            Err(EngineError::Syntax { .. })
        ));
    }
}
