//! Expression language for maps U -> K^e.
//!
//! Numeric and monomial constants in expressions denote exact field
//! elements; an `O(X^n)` atom injects a precision bound where one is wanted,
//! so `1 + X^2 + O(X^16)` evaluates to the series literal of the same text.

mod builtin;
mod parse;
mod random;

pub use builtin::gauss_expand;
pub use parse::{infer_arity, parse_expr};
pub use random::random_polynomial;

use crate::error::Result;
use crate::field::{LaurentSeries, PrimeField};
use std::fmt;

/// A map from points of K^d to K^e, evaluated exactly at series arguments.
///
/// Implemented by [`Expr`] and by derived maps such as divided differences,
/// which lets the calculus operators compose. `Sync` so batch checkers can
/// share one map across workers.
pub trait MapKd: Sync {
    fn arity(&self) -> usize;
    fn coarity(&self) -> usize;
    fn eval(&self, point: &[LaurentSeries]) -> Result<Vec<LaurentSeries>>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Builtin {
    /// Surface name `phi32`: relocates coefficient `a_k` to exponent
    /// `floor(3k/2)`. See [`gauss_expand`].
    GaussExpand,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::GaussExpand => "phi32",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "phi32" => Some(Builtin::GaussExpand),
            _ => None,
        }
    }

    pub fn apply(self, x: &LaurentSeries) -> Result<LaurentSeries> {
        match self {
            Builtin::GaussExpand => gauss_expand(x),
        }
    }
}

/// One scalar-valued component tree.
#[derive(Clone, PartialEq, Debug)]
pub enum ExprNode {
    /// 1-based variable reference.
    Var(usize),
    Const(LaurentSeries),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    Pow(Box<ExprNode>, u32),
    Builtin(Builtin, Box<ExprNode>),
}

impl ExprNode {
    fn eval(&self, point: &[LaurentSeries], field: PrimeField) -> Result<LaurentSeries> {
        match self {
            ExprNode::Var(i) => Ok(point[i - 1].clone()),
            ExprNode::Const(s) => {
                assert_eq!(s.field(), field, "constant over a different field");
                Ok(s.clone())
            }
            ExprNode::Add(a, b) => Ok(a.eval(point, field)?.add(&b.eval(point, field)?)),
            ExprNode::Sub(a, b) => Ok(a.eval(point, field)?.sub(&b.eval(point, field)?)),
            ExprNode::Mul(a, b) => Ok(a.eval(point, field)?.mul(&b.eval(point, field)?)),
            ExprNode::Div(a, b) => a.eval(point, field)?.div(&b.eval(point, field)?),
            ExprNode::Pow(a, e) => Ok(a.eval(point, field)?.int_pow(*e)),
            ExprNode::Builtin(b, a) => b.apply(&a.eval(point, field)?),
        }
    }
}

/// A parsed map U -> K^e: `e` component trees over variables `x1..xd`.
#[derive(Clone, PartialEq, Debug)]
pub struct Expr {
    arity: usize,
    components: Vec<ExprNode>,
    field: PrimeField,
}

impl Expr {
    /// Assembles an expression from component trees. Callers guarantee that
    /// variable indices stay within `arity`; the parser enforces this for
    /// user input.
    pub fn new(field: PrimeField, arity: usize, components: Vec<ExprNode>) -> Self {
        assert!(arity >= 1 && !components.is_empty());
        Expr {
            arity,
            components,
            field,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn components(&self) -> &[ExprNode] {
        &self.components
    }
}

impl MapKd for Expr {
    fn arity(&self) -> usize {
        self.arity
    }

    fn coarity(&self) -> usize {
        self.components.len()
    }

    fn eval(&self, point: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        assert_eq!(point.len(), self.arity, "point arity mismatch");
        self.components
            .iter()
            .map(|c| c.eval(point, self.field))
            .collect()
    }
}

// Printing binds exactly as the parser does, so `parse(print(e))` is
// structurally the identity on parser-produced trees.

fn node_level(node: &ExprNode) -> u8 {
    match node {
        ExprNode::Add(..) | ExprNode::Sub(..) => 1,
        ExprNode::Mul(..) | ExprNode::Div(..) => 2,
        ExprNode::Pow(..) => 3,
        ExprNode::Var(_) | ExprNode::Builtin(..) => 4,
        ExprNode::Const(s) => {
            if const_is_atom(s) {
                4
            } else {
                1
            }
        }
    }
}

/// Constants the grammar can produce as single atoms: residues, unit
/// monomials, and O(X^n) bounds.
fn const_is_atom(s: &LaurentSeries) -> bool {
    if s.is_zero_to_prec() {
        return s.prec().finite().is_some() || s.is_exactly_zero();
    }
    if !s.prec().is_exact() {
        return false;
    }
    let terms: Vec<_> = s.terms().collect();
    terms.len() == 1 && (terms[0].0 == 0 || terms[0].1.value() == 1)
}

fn fmt_node(node: &ExprNode, min_level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = node_level(node);
    let parens = level < min_level;
    if parens {
        write!(f, "(")?;
    }
    match node {
        ExprNode::Var(i) => write!(f, "x{i}")?,
        ExprNode::Const(s) => match s.prec().finite() {
            // a bare precision bound prints as the O-atom, not as `0 + O(..)`
            Some(n) if s.is_zero_to_prec() => write!(f, "O(X^{n})")?,
            _ => write!(f, "{s}")?,
        },
        ExprNode::Add(a, b) => {
            fmt_node(a, 1, f)?;
            write!(f, " + ")?;
            fmt_node(b, 2, f)?;
        }
        ExprNode::Sub(a, b) => {
            fmt_node(a, 1, f)?;
            write!(f, " - ")?;
            fmt_node(b, 2, f)?;
        }
        ExprNode::Mul(a, b) => {
            fmt_node(a, 2, f)?;
            write!(f, "*")?;
            fmt_node(b, 3, f)?;
        }
        ExprNode::Div(a, b) => {
            fmt_node(a, 2, f)?;
            write!(f, "/")?;
            fmt_node(b, 3, f)?;
        }
        ExprNode::Pow(a, e) => {
            fmt_node(a, 4, f)?;
            write!(f, "^{e}")?;
        }
        ExprNode::Builtin(b, a) => {
            write!(f, "{}(", b.name())?;
            fmt_node(a, 1, f)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.len() == 1 {
            fmt_node(&self.components[0], 1, f)
        } else {
            write!(f, "[")?;
            for (k, c) in self.components.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                fmt_node(c, 1, f)?;
            }
            write!(f, "]")
        }
    }
}
