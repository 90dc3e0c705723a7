//! Parser/printer round-trip corpus and evaluation properties.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultradiff_core::expr::{gauss_expand, parse_expr, random_polynomial};
use ultradiff_core::field::{LaurentSeries, Prec, PrimeField};
use ultradiff_core::MapKd;

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

/// Round-trip on a corpus well past fifty expressions: handwritten forms
/// covering every node kind, plus seeded random polynomials.
#[test]
fn parse_print_round_trip_corpus() {
    let handwritten = [
        "x1",
        "x1 + x2",
        "x1 - x2",
        "x1*x2",
        "x1/x2",
        "x1^2",
        "x1^0",
        "(x1 + x2)^3",
        "phi32(x1)",
        "phi32(x1 + X^2)",
        "phi32(phi32(x1))",
        "x1 + X^2 + O(X^16)",
        "1 + x1",
        "X^-3*x1",
        "O(X^8)",
        "x1*x2^2 + x2*x1^2",
        "x1/(x1 + x2)",
        "(x1 + 1)*(x2 + X)",
        "[x1, x2]",
        "[x1 + x2, x1*x2, phi32(x1)]",
        "x1^2^3",
        "x1 - x2 - x1",
        "x1/x2/x1",
        "phi32(x1)*phi32(x2) + X",
    ];
    let mut checked = 0;
    for text in handwritten {
        let d = 2;
        let e = parse_expr(text, f2(), d).unwrap();
        let printed = e.to_string();
        let reparsed = parse_expr(&printed, f2(), d)
            .unwrap_or_else(|err| panic!("reparse of `{printed}` failed: {err}"));
        assert_eq!(reparsed, e, "round trip of `{text}` via `{printed}`");
        checked += 1;
    }
    let f5 = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..40 {
        let field = if i % 2 == 0 { f2() } else { f5 };
        let e = random_polynomial(&mut rng, field, 2, 1 + i % 3, 4);
        let printed = e.to_string();
        let reparsed = parse_expr(&printed, field, 2).unwrap();
        assert_eq!(reparsed, e, "round trip of random `{printed}`");
        checked += 1;
    }
    assert!(checked >= 50, "corpus too small: {checked}");
}

proptest! {
    #[test]
    fn gauss_expand_is_additive(
        a in prop::collection::vec(0u64..2, 0..20),
        b in prop::collection::vec(0u64..2, 0..20),
        prec in 1i64..30,
    ) {
        let field = f2();
        let mk = |coeffs: &[u64]| {
            let terms: Vec<(i64, i64)> = coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (k as i64, c as i64))
                .collect();
            LaurentSeries::from_terms(field, &terms, Prec::Finite(prec))
        };
        let x = mk(&a);
        let y = mk(&b);
        let lhs = gauss_expand(&x.add(&y)).unwrap();
        let rhs = gauss_expand(&x).unwrap().add(&gauss_expand(&y).unwrap());
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert_eq!(lhs.prec(), rhs.prec());
    }

    #[test]
    fn gauss_expand_valuation_law(v in 0i64..24, pad in prop::collection::vec(0u64..2, 0..8)) {
        let field = f2();
        let mut terms = vec![(v, 1i64)];
        terms.extend(
            pad.iter()
                .enumerate()
                .map(|(k, &c)| (v + 1 + k as i64, c as i64)),
        );
        let x = LaurentSeries::from_terms(field, &terms, Prec::Finite(40));
        let y = gauss_expand(&x).unwrap();
        prop_assert_eq!(y.valuation(), Some(3 * v / 2));
    }

    #[test]
    fn evaluation_is_pure(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = f2();
        let f = random_polynomial(&mut rng, field, 2, 1, 3);
        let x = LaurentSeries::from_terms(field, &[(0, 1), (3, 1)], Prec::Finite(20));
        let y = LaurentSeries::from_terms(field, &[(1, 1)], Prec::Finite(20));
        let point = vec![x, y];
        let v1 = f.eval(&point).unwrap();
        let v2 = f.eval(&point).unwrap();
        prop_assert_eq!(v1, v2);
    }
}
