//! Seeded rejection samplers for the strict domains.
//!
//! Deterministic: a fixed (domain, count, prec, min_sep, seed) tuple yields
//! bit-identical points. Scans that fan out over rows derive one child seed
//! per row (`seed + index`) so parallel evaluation cannot reorder anything.

use super::{bracket_len, member_angle, member_bracket, BallDomain, BlockPoint, MultiIndex};
use crate::error::{EngineError, Result};
use crate::field::{LaurentSeries, PrimeField};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_REJECTIONS: u32 = 10_000;

/// Draws series with uniform coefficients, valuations adjusted into balls.
pub struct Sampler {
    rng: ChaCha8Rng,
    field: PrimeField,
    prec: i64,
}

impl Sampler {
    pub fn new(field: PrimeField, prec: i64, seed: u64) -> Self {
        assert!(prec >= 1, "sampling needs at least one known coefficient");
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field,
            prec,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    fn coeff(&mut self) -> i64 {
        self.rng.gen_range(0..self.field.modulus()) as i64
    }

    fn nonzero_coeff(&mut self) -> i64 {
        self.rng.gen_range(1..self.field.modulus()) as i64
    }

    pub fn gen_range(&mut self, range: std::ops::RangeInclusive<i64>) -> i64 {
        self.rng.gen_range(range)
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Uniform coefficients on the window `[lo, prec)`.
    pub fn series_with_support(&mut self, lo: i64) -> LaurentSeries {
        let terms: Vec<(i64, i64)> = (lo..self.prec).map(|e| (e, self.coeff())).collect();
        LaurentSeries::from_terms(self.field, &terms, crate::field::Prec::Finite(self.prec))
    }

    /// A unit times X^v: certified valuation exactly v.
    pub fn unit_with_valuation(&mut self, v: i64) -> LaurentSeries {
        let mut terms = vec![(v, self.nonzero_coeff())];
        terms.extend((v + 1..self.prec).map(|e| (e, self.coeff())));
        LaurentSeries::from_terms(self.field, &terms, crate::field::Prec::Finite(self.prec))
    }

    /// Random element of the ball {z : v(z - c) >= r}.
    pub fn in_ball(&mut self, center: &LaurentSeries, r: i64) -> LaurentSeries {
        center.add(&self.series_with_support(r))
    }

    /// Random point of the product domain.
    pub fn point(&mut self, u: &BallDomain) -> Vec<LaurentSeries> {
        (0..u.dim())
            .map(|i| self.in_ball(u.center(i), u.radius_exp(i)))
            .collect()
    }

    /// A scalar with certified valuation drawn from `[0, max_val]`.
    pub fn nonzero_scalar(&mut self, max_val: i64) -> LaurentSeries {
        let v = self.rng.gen_range(0..=max_val.max(0));
        self.unit_with_valuation(v)
    }

    /// Strict block point of U^{>alpha<}: within-block differences carry a
    /// certified nonzero coefficient at exponent <= prec - 1 - min_sep.
    pub fn block_point(
        &mut self,
        u: &BallDomain,
        alpha: &MultiIndex,
        min_sep: i64,
    ) -> Result<BlockPoint> {
        let max_val = self.prec - 1 - min_sep;
        for _ in 0..MAX_REJECTIONS {
            let mut values = Vec::with_capacity(alpha.flat_len());
            for i in 0..u.dim() {
                for _ in 0..alpha.block_len(i) {
                    values.push(self.in_ball(u.center(i), u.radius_exp(i)));
                }
            }
            let point = BlockPoint::new(alpha.clone(), values)?;
            if !separated(&point, max_val) {
                continue;
            }
            // sampler self-check: the point passes its own predicate
            assert_eq!(member_angle(u, &point, true), Ok(true));
            return Ok(point);
        }
        Err(EngineError::SamplerExhausted {
            attempts: MAX_REJECTIONS,
        })
    }

    /// Strict point of U^{]k[}, flat (x-block, y-block, t) layout.
    pub fn bracket_point(&mut self, u: &BallDomain, k: usize) -> Result<Vec<LaurentSeries>> {
        for _ in 0..MAX_REJECTIONS {
            let z = self.bracket_candidate(u, k);
            match member_bracket(u, k, &z, true) {
                Ok(true) => return Ok(z),
                _ => continue,
            }
        }
        Err(EngineError::SamplerExhausted {
            attempts: MAX_REJECTIONS,
        })
    }

    fn bracket_candidate(&mut self, u: &BallDomain, k: usize) -> Vec<LaurentSeries> {
        if k == 0 {
            return self.point(u);
        }
        let mut z = self.bracket_candidate(u, k - 1);
        // direction block: coordinates inside matching balls around 0 keep
        // every shift x + t*y inside U; interior t-slots are unconstrained.
        let d = u.dim();
        let y_len = bracket_len(d, k - 1);
        let mut y = Vec::with_capacity(y_len);
        for r in 0..y_len {
            let radius = coordinate_radius(u, k - 1, r);
            y.push(self.in_ball(&LaurentSeries::zero(self.field), radius));
        }
        z.extend(y);
        z.push(self.nonzero_scalar(3));
        z
    }
}

/// Ball radius governing slot `r` of a level-k flat tuple: E-coordinates
/// inherit the base radii, scalar slots sample in O.
fn coordinate_radius(u: &BallDomain, k: usize, r: usize) -> i64 {
    if k == 0 {
        return u.radius_exp(r).max(0);
    }
    let half = bracket_len(u.dim(), k - 1);
    if r < half {
        coordinate_radius(u, k - 1, r)
    } else if r < 2 * half {
        coordinate_radius(u, k - 1, r - half)
    } else {
        0
    }
}

fn separated(point: &BlockPoint, max_val: i64) -> bool {
    (0..point.alpha().dim()).all(|i| {
        let block = point.block(i);
        (0..block.len()).all(|j| {
            (j + 1..block.len()).all(|k| match block[j].sub(&block[k]).valuation() {
                Some(v) => v <= max_val,
                None => false,
            })
        })
    })
}

/// The spec-level sampling entry point: `count` strict points of
/// U^{>alpha<}, reproducible from `seed`.
pub fn sample_block_points(
    u: &BallDomain,
    alpha: &MultiIndex,
    count: usize,
    prec: i64,
    min_sep: i64,
    seed: u64,
) -> Result<Vec<BlockPoint>> {
    let mut sampler = Sampler::new(u.field(), prec, seed);
    (0..count)
        .map(|_| sampler.block_point(u, alpha, min_sep))
        .collect()
}

/// `count` strict points of U^{]k[}.
pub fn sample_bracket_points(
    u: &BallDomain,
    k: usize,
    count: usize,
    prec: i64,
    seed: u64,
) -> Result<Vec<Vec<LaurentSeries>>> {
    let mut sampler = Sampler::new(u.field(), prec, seed);
    (0..count).map(|_| sampler.bracket_point(u, k)).collect()
}
