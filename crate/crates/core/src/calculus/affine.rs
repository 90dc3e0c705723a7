//! Affine-linear maps with {-1, 0, +1} coefficients, and the transport map
//! carrying divided-difference tuples onto iterated-quotient tuples.

use crate::domains::{bracket_len, MultiIndex};
use crate::error::Result;
use crate::field::{LaurentSeries, PrimeField};
use crate::MapKd;

/// x |-> M x + c with entries of M and c in {-1, 0, +1}, applied exactly.
///
/// This family is closed under the compositions used here; `apply` embeds
/// the small constants as exact elements of K so no precision is spent on
/// them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    rows: usize,
    cols: usize,
    matrix: Vec<i8>, // row-major
    offset: Vec<i8>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        let mut m = AffineMap::zeroed(n, n);
        for i in 0..n {
            m.matrix[i * n + i] = 1;
        }
        m
    }

    fn zeroed(rows: usize, cols: usize) -> Self {
        AffineMap {
            rows,
            cols,
            matrix: vec![0; rows * cols],
            offset: vec![0; rows],
        }
    }

    pub fn source_dim(&self) -> usize {
        self.cols
    }

    pub fn target_dim(&self) -> usize {
        self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.matrix[i * self.cols + j]
    }

    pub fn offset_entry(&self, i: usize) -> i8 {
        self.offset[i]
    }

    pub fn apply(&self, x: &[LaurentSeries], field: PrimeField) -> Vec<LaurentSeries> {
        assert_eq!(x.len(), self.cols, "affine map applied to wrong dimension");
        (0..self.rows)
            .map(|i| {
                let mut acc: Option<LaurentSeries> = None;
                for (j, xj) in x.iter().enumerate() {
                    let m = self.entry(i, j);
                    if m == 0 {
                        continue;
                    }
                    acc = Some(match (acc, m > 0) {
                        (None, true) => xj.clone(),
                        (None, false) => xj.neg(),
                        (Some(a), true) => a.add(xj),
                        (Some(a), false) => a.sub(xj),
                    });
                }
                let c = self.offset[i];
                match (acc, c) {
                    (None, c) => LaurentSeries::constant(field, c as i64),
                    (Some(a), 0) => a,
                    (Some(a), c) => a.add(&LaurentSeries::constant(field, c as i64)),
                }
            })
            .collect()
    }

    /// self o inner.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        assert_eq!(self.cols, inner.rows);
        let mut out = AffineMap::zeroed(self.rows, inner.cols);
        for i in 0..self.rows {
            for j in 0..inner.cols {
                let mut acc: i32 = 0;
                for k in 0..self.cols {
                    acc += self.entry(i, k) as i32 * inner.entry(k, j) as i32;
                }
                assert!(acc.abs() <= 1, "composition left the signed-selection family");
                out.matrix[i * inner.cols + j] = acc as i8;
            }
            let mut c: i32 = self.offset[i] as i32;
            for k in 0..self.cols {
                c += self.entry(i, k) as i32 * inner.offset[k] as i32;
            }
            assert!(c.abs() <= 1, "composition left the signed-selection family");
            out.offset[i] = c as i8;
        }
        out
    }

    /// The lift (x, y, t) |-> (theta(x), lambda(y), t) of theta = lambda + c
    /// to one bracket level.
    pub fn tangent_lift(&self) -> AffineMap {
        let (r, c) = (self.rows, self.cols);
        let mut out = AffineMap::zeroed(2 * r + 1, 2 * c + 1);
        for i in 0..r {
            for j in 0..c {
                let m = self.entry(i, j);
                out.matrix[i * (2 * c + 1) + j] = m;
                out.matrix[(r + i) * (2 * c + 1) + (c + j)] = m;
            }
            out.offset[i] = self.offset[i];
        }
        out.matrix[(2 * r) * (2 * c + 1) + 2 * c] = 1;
        out
    }
}

/// The affine map theta with f^{<alpha>} = f^{[|alpha|]} o theta on block
/// points, built by induction: strip the last entry of the first nonempty
/// block into a (direction, increment) pair, then lift the smaller map one
/// bracket level.
pub fn transport_map(alpha: &MultiIndex) -> AffineMap {
    let d = alpha.dim();
    let Some(i) = alpha.first_positive() else {
        return AffineMap::identity(d);
    };
    let mut beta_entries = alpha.entries().to_vec();
    beta_entries[i] -= 1;
    let beta = MultiIndex::new(beta_entries);

    let start = alpha.block_start(i);
    let last = start + alpha.entry(i) as usize; // flat slot of x^{(i)}_{alpha_i}
    let src = alpha.flat_len();
    let mid = beta.flat_len();

    // h(x) = (x with the last block-i entry dropped; e_{start}; x_last - x_0)
    let mut h = AffineMap::zeroed(2 * mid + 1, src);
    for r in 0..mid {
        let col = if r < last { r } else { r + 1 };
        h.matrix[r * src + col] = 1;
    }
    h.offset[mid + start] = 1;
    h.matrix[(2 * mid) * src + last] = 1;
    h.matrix[(2 * mid) * src + start] = -1;

    transport_map(&beta).tangent_lift().compose(&h)
}

/// Divided-difference tuples realized through the quotient calculus:
/// evaluates f^{[j]} at theta_alpha(x). Exposed as a map so the transport
/// identity can be checked pointwise against the direct sum formula.
pub struct TransportedQuotient<'a> {
    f: &'a dyn MapKd,
    alpha: MultiIndex,
    theta: AffineMap,
}

impl<'a> TransportedQuotient<'a> {
    pub fn new(f: &'a dyn MapKd, alpha: MultiIndex) -> Self {
        assert_eq!(f.arity(), alpha.dim());
        let theta = transport_map(&alpha);
        debug_assert_eq!(theta.source_dim(), alpha.flat_len());
        debug_assert_eq!(theta.target_dim(), bracket_len(alpha.dim(), alpha.order()));
        TransportedQuotient { f, alpha, theta }
    }

    pub fn theta(&self) -> &AffineMap {
        &self.theta
    }
}

impl MapKd for TransportedQuotient<'_> {
    fn arity(&self) -> usize {
        self.alpha.flat_len()
    }

    fn coarity(&self) -> usize {
        self.f.coarity()
    }

    fn eval(&self, point: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let image = self.theta.apply(point, point[0].field());
        super::dq::iterated_quotient(self.f, self.alpha.order(), &image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn zero_order_is_identity() {
        let theta = transport_map(&MultiIndex::zero(2));
        assert_eq!(theta, AffineMap::identity(2));
    }

    #[test]
    fn first_order_shape() {
        // d = 1, alpha = (1): (x0, x1) |-> (x0, 1, x1 - x0)
        let theta = transport_map(&MultiIndex::new(vec![1]));
        assert_eq!(theta.source_dim(), 2);
        assert_eq!(theta.target_dim(), 3);
        let x0 = LaurentSeries::monomial(f2(), 1, 1);
        let x1 = LaurentSeries::monomial(f2(), 1, 2);
        let img = theta.apply(&[x0.clone(), x1.clone()], f2());
        assert_eq!(img[0], x0);
        assert_eq!(img[1], LaurentSeries::one(f2()));
        assert_eq!(img[2], x1.sub(&x0));
    }

    #[test]
    fn second_order_unfolds_newton() {
        // d = 1, alpha = (2): image (x0, 1, x1-x0, 1, 0, -1, x2-x0)
        let theta = transport_map(&MultiIndex::new(vec![2]));
        assert_eq!(theta.source_dim(), 3);
        assert_eq!(theta.target_dim(), 7);
        let x: Vec<_> = (1..=3)
            .map(|e| LaurentSeries::monomial(f2(), 1, e))
            .collect();
        let img = theta.apply(&x, f2());
        assert_eq!(img[0], x[0]);
        assert_eq!(img[1], LaurentSeries::one(f2()));
        assert_eq!(img[2], x[1].sub(&x[0]));
        assert_eq!(img[3], LaurentSeries::one(f2()));
        assert!(img[4].is_exactly_zero());
        assert_eq!(img[5], LaurentSeries::constant(f2(), -1));
        assert_eq!(img[6], x[2].sub(&x[0]));
    }

    #[test]
    fn lift_and_compose_stay_signed() {
        let theta = transport_map(&MultiIndex::new(vec![2, 1]));
        assert_eq!(theta.source_dim(), 5);
        assert_eq!(theta.target_dim(), bracket_len(2, 3));
        for i in 0..theta.target_dim() {
            for j in 0..theta.source_dim() {
                assert!(theta.entry(i, j).abs() <= 1);
            }
            assert!(theta.offset_entry(i).abs() <= 1);
        }
    }
}
