//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr := sum | '[' sum {',' sum} ']'
//! sum  := prod {('+'|'-') prod}
//! prod := atom {('*'|'/') atom}
//! atom := var | serieslit | builtin '(' expr ')' | '(' expr ')' | atom '^' nat
//! var  := 'x' nat
//! ```
//!
//! Series literals appear term-by-term (`1`, `X^3`, `O(X^16)`); their sums
//! reassemble at the `sum` level with identical value and precision.

use super::{Builtin, Expr, ExprNode};
use crate::error::{EngineError, Result};
use crate::field::{LaurentSeries, PrimeField};

#[derive(Clone, Copy, PartialEq, Debug)]
enum Tok<'a> {
    Num(u64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(Tok<'_>, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = text[start..i].parse().map_err(|_| EngineError::Syntax {
                    pos: start,
                    expected: "integer within range".into(),
                })?;
                out.push((Tok::Num(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(&text[start..i]), start));
                continue;
            }
            _ => {
                return Err(EngineError::Syntax {
                    pos: i,
                    expected: "operator, number, or identifier".into(),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    at: usize,
    end: usize,
    field: PrimeField,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.at).map(|&(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> EngineError {
        EngineError::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok<'a>, what: &str) -> Result<()> {
        if self.peek() == Some(tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Num(n)) => {
                let v = i64::try_from(n).map_err(|_| self.err("integer within range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("integer")),
        }
    }

    /// `'X' ['^' int]` with the leading `X` already consumed.
    fn monomial_exponent(&mut self) -> Result<i64> {
        if self.peek() == Some(Tok::Caret) {
            self.at += 1;
            self.signed_int()
        } else {
            Ok(1)
        }
    }

    fn atom(&mut self) -> Result<ExprNode> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(c)) => {
                if c >= self.field.modulus() {
                    return Err(EngineError::Syntax {
                        pos,
                        expected: format!("coefficient in 0..{}", self.field.modulus() - 1),
                    });
                }
                Ok(ExprNode::Const(LaurentSeries::constant(self.field, c as i64)))
            }
            Some(Tok::Ident("X")) => {
                let e = self.monomial_exponent()?;
                Ok(ExprNode::Const(LaurentSeries::monomial(self.field, 1, e)))
            }
            Some(Tok::Ident("O")) => {
                self.expect(Tok::LParen, "'('")?;
                self.expect(Tok::Ident("X"), "'X'")?;
                self.expect(Tok::Caret, "'^'")?;
                let n = self.signed_int()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(ExprNode::Const(LaurentSeries::zero_to_prec(self.field, n)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    if idx == 0 || idx > self.arity {
                        return Err(EngineError::Arity {
                            pos,
                            index: idx,
                            arity: self.arity,
                        });
                    }
                    return Ok(ExprNode::Var(idx));
                }
                if let Some(b) = Builtin::from_name(name) {
                    self.expect(Tok::LParen, "'('")?;
                    let inner = self.sum()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(ExprNode::Builtin(b, Box::new(inner)));
                }
                Err(EngineError::Syntax {
                    pos,
                    expected: "variable x<k>, builtin, or series term".into(),
                })
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(EngineError::Syntax {
                pos,
                expected: "atom".into(),
            }),
        }
    }

    fn postfix(&mut self) -> Result<ExprNode> {
        let mut node = self.atom()?;
        while self.peek() == Some(Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(n).map_err(|_| EngineError::Syntax {
                        pos,
                        expected: "exponent within range".into(),
                    })?;
                    node = ExprNode::Pow(Box::new(node), e);
                }
                _ => {
                    return Err(EngineError::Syntax {
                        pos,
                        expected: "non-negative integer exponent".into(),
                    })
                }
            }
        }
        Ok(node)
    }

    fn prod(&mut self) -> Result<ExprNode> {
        let mut node = self.postfix()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    node = ExprNode::Mul(Box::new(node), Box::new(self.postfix()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    node = ExprNode::Div(Box::new(node), Box::new(self.postfix()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn sum(&mut self) -> Result<ExprNode> {
        let mut node = self.prod()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    node = ExprNode::Add(Box::new(node), Box::new(self.prod()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    node = ExprNode::Sub(Box::new(node), Box::new(self.prod()?));
                }
                _ => return Ok(node),
            }
        }
    }
}

/// Parses a map expression with `arity` variables over `field`.
pub fn parse_expr(text: &str, field: PrimeField, arity: usize) -> Result<Expr> {
    if arity == 0 {
        return Err(EngineError::Shape("arity must be at least 1".into()));
    }
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        field,
        arity,
    };
    let components = if p.peek() == Some(Tok::LBracket) {
        p.at += 1;
        let mut comps = vec![p.sum()?];
        while p.peek() == Some(Tok::Comma) {
            p.at += 1;
            comps.push(p.sum()?);
        }
        p.expect(Tok::RBracket, "']' or ','")?;
        comps
    } else {
        vec![p.sum()?]
    };
    if p.at != p.toks.len() {
        return Err(p.err("end of input"));
    }
    Ok(Expr::new(field, arity, components))
}

/// Largest variable index mentioned in the text (at least 1). Lets the CLI
/// run without an explicit arity flag.
pub fn infer_arity(text: &str) -> usize {
    let Ok(toks) = lex(text) else { return 1 };
    toks.iter()
        .filter_map(|&(t, _)| match t {
            Tok::Ident(name) => name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()),
            _ => None,
        })
        .max()
        .unwrap_or(1)
        .max(1)
}
