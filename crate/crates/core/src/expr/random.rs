//! Seeded polynomial generator for randomized identity checks.

use super::{Expr, ExprNode};
use crate::field::{LaurentSeries, PrimeField};
use rand::Rng;

/// A random polynomial map K^d -> K^e with exact residue coefficients and
/// per-component total degree at most `max_degree`.
pub fn random_polynomial(
    rng: &mut impl Rng,
    field: PrimeField,
    d: usize,
    e: usize,
    max_degree: u32,
) -> Expr {
    let components = (0..e)
        .map(|_| random_component(rng, field, d, max_degree))
        .collect();
    Expr::new(field, d, components)
}

fn random_component(rng: &mut impl Rng, field: PrimeField, d: usize, max_degree: u32) -> ExprNode {
    let n_terms = rng.gen_range(1..=4usize);
    let mut node: Option<ExprNode> = None;
    for _ in 0..n_terms {
        let term = random_monomial(rng, field, d, max_degree);
        node = Some(match node {
            None => term,
            Some(acc) => ExprNode::Add(Box::new(acc), Box::new(term)),
        });
    }
    node.unwrap()
}

fn random_monomial(rng: &mut impl Rng, field: PrimeField, d: usize, max_degree: u32) -> ExprNode {
    let coeff = if field.modulus() == 2 {
        1
    } else {
        rng.gen_range(1..field.modulus()) as i64
    };
    let mut node = ExprNode::Const(LaurentSeries::constant(field, coeff));
    let mut budget = rng.gen_range(0..=max_degree);
    for i in 1..=d {
        if budget == 0 {
            break;
        }
        let deg = rng.gen_range(0..=budget);
        budget -= deg;
        match deg {
            0 => {}
            1 => node = ExprNode::Mul(Box::new(node), Box::new(ExprNode::Var(i))),
            k => {
                node = ExprNode::Mul(
                    Box::new(node),
                    Box::new(ExprNode::Pow(Box::new(ExprNode::Var(i)), k)),
                )
            }
        }
    }
    node
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, MapKd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_round_trippable() {
        let field = PrimeField::new(2).unwrap();
        let mut rng1 = ChaCha8Rng::seed_from_u64(11);
        let mut rng2 = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_polynomial(&mut rng1, field, 2, 1, 4);
            let b = random_polynomial(&mut rng2, field, 2, 1, 4);
            assert_eq!(a, b);
            let reparsed = parse_expr(&a.to_string(), field, a.arity()).unwrap();
            assert_eq!(reparsed, a);
        }
    }
}
