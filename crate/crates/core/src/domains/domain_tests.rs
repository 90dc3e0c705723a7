use super::*;
use crate::field::parse_series;

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn s(text: &str) -> LaurentSeries {
    parse_series(text, f2(), 64).unwrap()
}

#[test]
fn angle_membership_examples() {
    let u = BallDomain::unit_ball(f2(), 1);
    let alpha = MultiIndex::new(vec![1]);
    let x = BlockPoint::new(alpha.clone(), vec![s("0"), s("X")]).unwrap();
    assert_eq!(member_angle(&u, &x, false), Ok(true));
    assert_eq!(member_angle(&u, &x, true), Ok(true));

    // repeated coordinate: fine non-strictly, not a strict member
    let rep = BlockPoint::new(alpha.clone(), vec![s("X"), s("X")]).unwrap();
    assert_eq!(member_angle(&u, &rep, false), Ok(true));
    assert_eq!(member_angle(&u, &rep, true), Ok(false));

    // second coordinate outside O
    let u2 = BallDomain::unit_ball(f2(), 2);
    let alpha2 = MultiIndex::new(vec![1, 0]);
    let out = BlockPoint::new(alpha2, vec![s("0"), s("X"), s("X^-1")]).unwrap();
    assert_eq!(member_angle(&u2, &out, false), Ok(false));
}

#[test]
fn angle_membership_undecidable_radius() {
    // ball of radius exponent 4 around 0; candidate known only to O(X^2)
    let u = BallDomain::new(f2(), vec![(LaurentSeries::zero(f2()), 4)]);
    let alpha = MultiIndex::zero(1);
    let x = BlockPoint::new(alpha, vec![s("0 + O(X^2)")]).unwrap();
    assert!(matches!(
        member_angle(&u, &x, false),
        Err(EngineError::UndecidableAtPrecision(_))
    ));
}

#[test]
fn bracket_membership_examples() {
    let u = BallDomain::unit_ball(f2(), 1);
    // 0 + X*1 = X stays in O
    let z = vec![s("0"), s("1"), s("X")];
    assert_eq!(member_bracket(&u, 1, &z, false), Ok(true));
    assert_eq!(member_bracket(&u, 1, &z, true), Ok(true));
    // 1 + X^-1 leaves O
    let out = vec![s("1"), s("1"), s("X^-1")];
    assert_eq!(member_bracket(&u, 1, &out, false), Ok(false));
    // t = 0 is excluded from the strict domain only
    let tz = vec![s("0"), s("1"), s("0")];
    assert_eq!(member_bracket(&u, 1, &tz, false), Ok(true));
    assert_eq!(member_bracket(&u, 1, &tz, true), Ok(false));
}

#[test]
fn strict_implies_nonstrict_on_samples() {
    let u = BallDomain::unit_ball(f2(), 2);
    let alpha = MultiIndex::new(vec![2, 1]);
    for p in sample_block_points(&u, &alpha, 10, 16, 0, 21).unwrap() {
        assert_eq!(member_angle(&u, &p, true), Ok(true));
        assert_eq!(member_angle(&u, &p, false), Ok(true));
    }
    for z in sample_bracket_points(&u, 2, 10, 16, 22).unwrap() {
        assert_eq!(member_bracket(&u, 2, &z, true), Ok(true));
        assert_eq!(member_bracket(&u, 2, &z, false), Ok(true));
    }
}

#[test]
fn ludkovsky_membership() {
    let u = BallDomain::unit_ball(f2(), 1);
    let x = vec![s("X")];
    let xis = vec![vec![s("1")], vec![s("1 + X")]];
    let ts = vec![s("X^2"), s("X^3")];
    assert_eq!(member_ludkovsky(&u, &x, &xis, &ts, true), Ok(true));
    // a scalar that is zero to precision cannot be certified nonzero
    let ts_bad = vec![s("X^2"), s("0 + O(X^4)")];
    assert_eq!(member_ludkovsky(&u, &x, &xis, &ts_bad, true), Ok(false));
    // a direction that kicks the point out of O
    let xis_out = vec![vec![s("X^-4")], vec![s("1")]];
    assert_eq!(member_ludkovsky(&u, &x, &xis_out, &ts, false), Ok(false));
}

#[test]
fn block_views_share_flat_storage() {
    let alpha = MultiIndex::new(vec![1, 2]);
    assert_eq!(alpha.flat_len(), 5);
    assert_eq!(alpha.block_start(0), 0);
    assert_eq!(alpha.block_start(1), 2);
    let values: Vec<LaurentSeries> = (0..5)
        .map(|e| LaurentSeries::monomial(f2(), 1, e))
        .collect();
    let x = BlockPoint::new(alpha, values.clone()).unwrap();
    assert_eq!(x.block(0), &values[0..2]);
    assert_eq!(x.block(1), &values[2..5]);
    assert_eq!(x.value(1, 2), &values[4]);
    let sel = x.selection(&[1, 0]);
    assert_eq!(sel[0], values[1]);
    assert_eq!(sel[1], values[2]);
    assert_eq!(x.selections().count(), 2 * 3);
}

#[test]
fn multi_index_enumeration() {
    let list = multi_indices_up_to(2, 3);
    assert!(list.iter().all(|a| (1..=3).contains(&(a.order() as u32))));
    assert!(list.contains(&MultiIndex::new(vec![1, 2])));
    assert!(list.contains(&MultiIndex::new(vec![3, 0])));
    assert!(!list.contains(&MultiIndex::zero(2)));
    // orders 1, 2, 3 over two coordinates: 2 + 3 + 4 tuples
    assert_eq!(list.len(), 9);
}
