//! Cross-calculus invariants checked against independent oracles and
//! closed forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultradiff_core::calculus::{
    check_fviaphi, check_simpfml, difference_quotient, divided_difference,
    divided_difference_recursive, ludkovsky_quotient, transport_map, CheckConfig,
    TransportedQuotient,
};
use ultradiff_core::domains::{
    multi_indices_up_to, BallDomain, BlockPoint, MultiIndex, Sampler,
};
use ultradiff_core::expr::{parse_expr, random_polynomial};
use ultradiff_core::field::{LaurentSeries, PrimeField};
use ultradiff_core::MapKd;

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

#[test]
fn fviaphi_bilinear_closed_form() {
    // Independent oracle for f = x1*x2: the quotient expands symbolically to
    // x1 y2 + x2 y1 + t y1 y2. Freeze that expansion with plain series ops
    // and compare the engine's quotient against it on sampled tuples.
    let f = parse_expr("x1*x2", f2(), 2).unwrap();
    let u = BallDomain::unit_ball(f2(), 2);
    let mut sampler = Sampler::new(f2(), 32, 77);
    for _ in 0..50 {
        let x = sampler.point(&u);
        let y = sampler.point(&u);
        let t = sampler.nonzero_scalar(3);
        let expected = x[0]
            .mul(&y[1])
            .add(&x[1].mul(&y[0]))
            .add(&t.mul(&y[0]).mul(&y[1]));
        let got = difference_quotient(&f, &x, &y, &t).unwrap();
        assert!(got[0].agrees_with(&expected));
    }
}

#[test]
fn fviaphi_check_passes_for_products_and_linears() {
    let u = BallDomain::unit_ball(f2(), 2);
    let cfg = CheckConfig {
        samples: 100,
        prec: 48,
        seed: 3,
    };
    for text in ["x1*x2", "x1 + x2", "x1^2*x2 + x2^3", "[x1*x2, x1 + x2^2]"] {
        let f = parse_expr(text, f2(), 2).unwrap();
        let report = check_fviaphi(&f, &u, &cfg).unwrap();
        assert!(report.passed(), "{text}: {}", report.to_text());
    }
}

#[test]
fn simpfml_spec_cases() {
    let u1 = BallDomain::unit_ball(f2(), 1);
    let cfg = CheckConfig {
        samples: 60,
        prec: 48,
        seed: 5,
    };
    let f = parse_expr("x1^3", f2(), 1).unwrap();
    let report = check_simpfml(
        &f,
        &MultiIndex::new(vec![1]),
        &MultiIndex::new(vec![0, 1]),
        &u1,
        &cfg,
    )
    .unwrap();
    assert!(report.passed(), "{}", report.to_text());

    let u2 = BallDomain::unit_ball(f2(), 2);
    let g = parse_expr("x1*x2", f2(), 2).unwrap();
    let report = check_simpfml(
        &g,
        &MultiIndex::new(vec![1, 0]),
        &MultiIndex::new(vec![0, 0, 1]),
        &u2,
        &cfg,
    )
    .unwrap();
    assert!(report.passed(), "{}", report.to_text());
}

#[test]
fn zero_beta_composition_is_trivial() {
    // beta = 0 flattens to nothing: (f^{>a<})^{>0<} = f^{>a<}
    let f = parse_expr("x1^3 + x1", f2(), 1).unwrap();
    let alpha = MultiIndex::new(vec![2]);
    let mut sampler = Sampler::new(f2(), 32, 11);
    let u = BallDomain::unit_ball(f2(), 1);
    let x = sampler.block_point(&u, &alpha, 0).unwrap();
    let lhs = divided_difference(&f, &x).unwrap();
    let beta = MultiIndex::zero(alpha.flat_len());
    let g = ultradiff_core::calculus::DividedDifferenceMap::new(&f, alpha.clone());
    let z = BlockPoint::new(beta, x.flat().to_vec()).unwrap();
    let rhs = divided_difference(&g, &z).unwrap();
    assert_eq!(lhs.len(), rhs.len());
    for (a, b) in lhs.iter().zip(&rhs) {
        assert!(a.agrees_with(b));
    }
}

#[test]
fn transport_agrees_across_orders_and_dims() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for d in 1..=2usize {
        let u = BallDomain::unit_ball(f2(), d);
        for alpha in multi_indices_up_to(d, 3) {
            let f = random_polynomial(&mut rng, f2(), d, 1, 4);
            let through = TransportedQuotient::new(&f, alpha.clone());
            let mut sampler = Sampler::new(f2(), 48, 31);
            for _ in 0..5 {
                let x = sampler.block_point(&u, &alpha, 0).unwrap();
                let lhs = divided_difference(&f, &x).unwrap();
                let rhs = through.eval(x.flat()).unwrap();
                assert!(
                    lhs.iter().zip(&rhs).all(|(a, b)| a.agrees_with(b)),
                    "alpha {alpha} of {f}"
                );
            }
        }
    }
}

#[test]
fn transport_map_dimensions() {
    for (d, entries) in [(1, vec![3]), (2, vec![2, 1]), (3, vec![1, 1, 1])] {
        let alpha = MultiIndex::new(entries);
        let theta = transport_map(&alpha);
        assert_eq!(theta.source_dim(), alpha.flat_len());
        assert_eq!(
            theta.target_dim(),
            ultradiff_core::domains::bracket_len(d, alpha.order())
        );
    }
}

#[test]
fn recursion_matches_direct_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut cases = 0;
    for d in 1..=2usize {
        let u = BallDomain::unit_ball(f2(), d);
        for alpha in multi_indices_up_to(d, 3) {
            let f = random_polynomial(&mut rng, f2(), d, 1, 4);
            let mut sampler = Sampler::new(f2(), 48, 7);
            for _ in 0..4 {
                let x = sampler.block_point(&u, &alpha, 0).unwrap();
                let a = divided_difference(&f, &x).unwrap();
                let b = divided_difference_recursive(&f, &x).unwrap();
                assert!(a[0].agrees_with(&b[0]), "alpha {alpha} of {f}");
                cases += 1;
            }
        }
    }
    assert!(cases >= 40);
}

#[test]
fn ludkovsky_level_one_is_the_difference_quotient() {
    let mut sampler = Sampler::new(f2(), 40, 13);
    let u = BallDomain::unit_ball(f2(), 2);
    let f = parse_expr("[x1*x2 + x2, x1^2]", f2(), 2).unwrap();
    for _ in 0..25 {
        let x = sampler.point(&u);
        let xi = sampler.point(&u);
        let t = sampler.nonzero_scalar(4);
        let a = ludkovsky_quotient(&f, &x, &[xi.clone()], &[t.clone()]).unwrap();
        let b = difference_quotient(&f, &x, &xi, &t).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn linear_map_quotient_is_independent_of_base_and_scale() {
    let f = parse_expr("x1 + x2", f2(), 2).unwrap();
    let u = BallDomain::unit_ball(f2(), 2);
    let mut sampler = Sampler::new(f2(), 40, 19);
    let xi = sampler.point(&u);
    let expected = xi[0].add(&xi[1]);
    for _ in 0..25 {
        let x = sampler.point(&u);
        let t = sampler.nonzero_scalar(4);
        let v = difference_quotient(&f, &x, &xi, &t).unwrap();
        assert!(v[0].agrees_with(&expected));
    }
}
